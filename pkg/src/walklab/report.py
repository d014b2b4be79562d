"""Assemble every verifier into one JSON-serialisable analysis report.

Each entry under ``checks`` records a measured value, the tolerance it was
judged against, whether theory predicts it to hold on this instance, and the
outcome.  A report *fails* iff some predicted check does not hold.
"""

from __future__ import annotations

import json
import math
import time
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from .balance import (
    balance_report,
    check_cycle_condition,
    check_reversal_symmetry,
    check_wdb,
    closed_form_regular,
)
from .errors import BudgetExceeded, DeadEnd, Disconnected, NotIrreducible, WalkLabError
from .ergodicity import check_thm31, is_irreducible
from .graph import Graph, Params
from .kernels import CONSTRUCTION_TOL, EDGE, build_edge_kernel, build_wedge_kernel, is_bistochastic
from .recurrence import build_aux_chain, collapse_series, verify_nstep_directed_balance
from .stationary import (
    NODE,
    invariance_residual,
    pullback,
    stationary,
    verify_edge_wedge_product,
    verify_simplified_invariance,
    wedge_measure_from_edges,
)

SCHEMA_VERSION = 1
SERIES_TERMS = 200


def tool_version() -> str:
    try:
        return version("walklab")
    except PackageNotFoundError:
        return "0+unknown"


def _check(value, tol, predicted, holds=None, kind="le"):
    """One report entry; ``holds`` defaults to ``value <= tol``."""
    value = _plain(value)
    if holds is None:
        holds = value is not None and value <= tol
    return {"value": value, "tol": tol, "predicted": bool(predicted), "holds": bool(holds), "kind": kind}


def _plain(x):
    """Convert numpy scalars/arrays to JSON-native values; non-finite floats become None."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def graph_summary(g: Graph) -> dict:
    d = g.degrees
    return {
        "name": g.name,
        "n": g.n,
        "num_edges": g.num_edges,
        "num_directed_edges": g.num_directed_edges,
        "num_wedges": g.num_wedges,
        "kind_counts": g.kind_counts(),
        "degree": {"min": int(d.min()), "max": int(d.max()), "mean": float(d.mean())},
        "labels": [str(x) for x in g.labels],
    }


def analyze(
    g: Graph,
    params: Params,
    tol: float = 1e-10,
    method: str = "direct",
    max_cycle_len: int = 8,
    recurrence_lab: bool = False,
) -> dict:
    t0 = time.perf_counter()
    if not g.is_connected():
        raise Disconnected(f"graph {g.name!r} is not connected")
    checks = {}
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": tool_version(),
        "graph": graph_summary(g),
        "params": {"alpha": params.alpha, "beta": params.beta, "gamma": params.gamma},
        "tolerances": {"verdict": tol, "construction": CONSTRUCTION_TOL},
        "method": method,
    }

    erg = {space: check_thm31(g, params, space) for space in ("edge", "wedge")}
    report["ergodicity"] = {s: v.to_dict() for s, v in erg.items()}
    for s, v in erg.items():
        checks[f"ergodic_theorem_{s}"] = _check(None, None, v.within_hypotheses, v.consistent, kind="bool")

    k_edge = build_edge_kernel(g, params)
    k_wedge = build_wedge_kernel(g, params)
    bi_e, bi_w = is_bistochastic(k_edge, tol), is_bistochastic(k_wedge, tol)
    report["bistochastic"] = {
        "edge": {"bistochastic": bi_e.bistochastic, "max_deviation": bi_e.max_deviation, "tol": tol},
        "wedge": {"bistochastic": bi_w.bistochastic, "max_deviation": bi_w.max_deviation, "tol": tol},
    }
    checks["edge_bistochastic_when_beta_eq_gamma"] = _check(
        bi_e.max_deviation, tol, params.beta == params.gamma, kind="le"
    )

    if not (is_irreducible(k_edge) and is_irreducible(k_wedge)):
        report["stationary"] = None
        report["note"] = "kernel reducible: no unique stationary measure, measure checks skipped"
        _finish(report, checks, t0)
        return report

    pi_hat = stationary(k_wedge, method=method)
    pi_edge = stationary(k_edge, method=method)
    pi_node = pullback(g, pi_hat, NODE)
    report["stationary"] = {
        "wedge": pi_hat.to_dict(g),
        "edge": pi_edge.to_dict(g),
        "node": pi_node.to_dict(g),
    }

    checks["wedge_invariance"] = _check(invariance_residual(pi_hat, k_wedge, ord=1), tol, True)
    checks["edge_invariance"] = _check(invariance_residual(pi_edge, k_edge, ord=1), tol, True)
    checks["simplified_invariance"] = _check(verify_simplified_invariance(g, params, pi_hat), tol, True)
    checks["edge_wedge_product"] = _check(verify_edge_wedge_product(g, pi_edge, k_edge, pi_hat), tol, True)
    edge_pull = pullback(g, pi_hat, EDGE)
    checks["edge_pullback"] = _check(float(np.max(np.abs(edge_pull.values - pi_edge.values))), tol, True)
    commute = float(np.max(np.abs(pullback(g, edge_pull, NODE).values - pi_node.values)))
    checks["pullback_commutes"] = _check(commute, CONSTRUCTION_TOL, True)

    bal = balance_report(g, params, pi_edge, k_edge, pi_hat, k_wedge, tol)
    report["balance"] = bal.to_dict()
    checks["eulerian_iff_regular"] = _check(None, None, True, bal.eulerian == bal.regular, kind="bool")
    checks["wedgefact"] = _check(bal.wedgefact_violation, CONSTRUCTION_TOL, True)
    if bal.regular:
        closed = closed_form_regular(g, params)
        checks["regular_closed_form"] = _check(float(np.max(np.abs(closed.values - pi_hat.values))), tol, True)
        checks["regular_wdb"] = _check(bal.wdb_residual, tol, True)
    edb = bal.edb_residual <= tol
    if edb:
        checks["edb_implies_edge_invariance"] = _check(invariance_residual(pi_edge, k_edge, ord=np.inf), tol, True)
        if params.alpha > 0:
            checks["edb_implies_edge_reversal"] = _check(bal.edge_reversal_residual, tol, True)
        if bal.edge_reversal_residual <= tol:
            built = wedge_measure_from_edges(g, pi_edge, k_edge)
            checks["edb_reversal_implies_wdb"] = _check(check_wdb(g, built, k_wedge), tol, True)
            checks["edb_reversal_implies_wedge_reversal"] = _check(check_reversal_symmetry(g, built), tol, True)
    if bal.wdb_residual <= tol and params.alpha > 0:
        checks["wdb_implies_wedge_reversal"] = _check(bal.wedge_reversal_residual, tol, True)

    if params.alpha == 0:
        try:
            cyc = check_cycle_condition(g, params, max_cycle_len)
        except BudgetExceeded as exc:
            report["cycle_condition"] = {"error": str(exc), "max_len": max_cycle_len}
        else:
            report["cycle_condition"] = {
                "holds": cyc.holds,
                "worst_cycle": cyc.worst_cycle,
                "worst_log_ratio": cyc.worst_ratio,
                "cycles_checked": cyc.cycles_checked,
                "max_len": cyc.max_len,
            }
            # a failing cycle is a genuine witness; a pass is only as good as the length cap
            rev = bal.edge_reversal_residual <= tol
            checks["cycle_condition_vs_reversal"] = _check(
                None, None, edb, cyc.holds or not rev, kind="bool"
            )

    if recurrence_lab:
        report["recurrence"] = _recurrence_section(g, params, pi_edge, k_edge, tol, checks, edb)

    _finish(report, checks, t0)
    return report


def _recurrence_section(g, params, pi_edge, k_edge, tol, checks, edb) -> dict:
    try:
        aux = build_aux_chain(g, params, pi_edge)
    except (DeadEnd, NotIrreducible, WalkLabError) as exc:
        return {"error": f"{type(exc).__name__}: {exc}"}
    kbar = aux.K_bar.toarray()
    series = collapse_series(g, aux.K_lazy, aux.p, SERIES_TERMS)
    series_bound = (1.0 - aux.p) ** (SERIES_TERMS + 1)
    out = {
        "mode": aux.mode,
        "p": aux.p,
        "pi_bar": aux.pi_bar.to_dict(g),
        "kbar_row_sum_deviation": float(np.max(np.abs(kbar.sum(axis=1) - 1.0))),
        "reversibility_residual": aux.reversibility_residual,
        "series_terms": SERIES_TERMS,
        "series_residual": float(np.max(np.abs(series - kbar))),
        "series_bound": series_bound,
        "nstep_balance_residual": verify_nstep_directed_balance(g, pi_edge, k_edge, 5),
        "notes": aux.notes,
    }
    if aux.alpha_zero is not None:
        az = aux.alpha_zero
        out["alpha_zero"] = {"M": az.M, "p": az.p, "max_degree": az.max_degree, "min_return_mass": az.min_return_mass}
        checks["alpha_zero_return_mass"] = _check(None, 2 * az.p, True, az.min_return_mass >= 2 * az.p, kind="ge")
    rev_ok = params.alpha > 0 or (
        float(np.max(np.abs(pi_edge.values - pi_edge.values[g.edge_reverse]))) <= tol
    )
    checks["kbar_row_stochastic"] = _check(out["kbar_row_sum_deviation"], tol, True)
    checks["kbar_reversible"] = _check(aux.reversibility_residual, tol, edb and rev_ok)
    checks["kbar_series"] = _check(out["series_residual"], series_bound + CONSTRUCTION_TOL, True)
    checks["nstep_directed_balance"] = _check(out["nstep_balance_residual"], tol, edb)
    return out


def _finish(report, checks, t0):
    report["checks"] = checks
    report["violations"] = sorted(k for k, c in checks.items() if c["predicted"] and not c["holds"])
    report["ok"] = not report["violations"]
    report["timing_seconds"] = time.perf_counter() - t0
    report.update(_plain({k: report[k] for k in report}))


def dumps(report: dict) -> str:
    return json.dumps(_plain(report), indent=2, sort_keys=True, allow_nan=False)


def loads(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema {doc.get('schema_version')!r}")
    return doc
