"""Directed detailed balance, weighted Eulerianity and the related symmetry checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import BudgetExceeded, Disconnected, PreconditionFailed
from .graph import Graph, Params, kind_counts_per_edge, wedge_weights
from .kernels import Kernel
from .stationary import Measure, invariance_residual

EXACT_TOL = 1e-12


@dataclass
class EulerianityVerdict:
    holds: bool
    max_violation: float
    witness: Optional[tuple]  # worst wedge as a node triple


def check_eulerianity(g: Graph, params: Params) -> EulerianityVerdict:
    """Is sum of lambda over ON(w) equal to the sum over IN(w) for every wedge?

    Both sums depend only on the first edge of ``w``, so they are compared via
    per-edge type counts; with integer weights the comparison is exact.
    """
    out_c = kind_counts_per_edge(g, "out")
    in_c = kind_counts_per_edge(g, "in")
    diff_counts = out_c - in_c
    # the sums for w are indexed by e1(w); every directed edge is e1 of some wedge
    if params.is_integral:
        w = np.array([int(params.alpha), int(params.beta), int(params.gamma)], dtype=np.int64)
        viol = np.abs(diff_counts @ w).astype(float)
        holds_mask = viol == 0
    else:
        viol = np.abs(diff_counts @ params.weights)
        holds_mask = viol <= EXACT_TOL
    holds = bool(holds_mask.all())
    witness = None
    if not holds:
        e = int(np.argmax(viol))
        wi = int(g.wedge_offset[e])
        witness = tuple(g.wedge_nodes[wi].tolist())
    return EulerianityVerdict(holds, float(viol.max()) if viol.size else 0.0, witness)


def check_regular(g: Graph) -> bool:
    if not g.is_connected():
        raise Disconnected("regularity check needs a connected graph")
    return bool(np.all(g.degrees == g.degrees[0]))


def check_edb(g: Graph, pi_edge: Measure, k_edge: Kernel) -> float:
    """max over wedge-connected (e, e') of |pi(e) P(e, e') - pi(e') P(-e', -e)|."""
    e, f = g.wedge_first, g.wedge_second
    rev = g.edge_reverse
    lhs = pi_edge.values[e] * k_edge.entries(e, f)
    rhs = pi_edge.values[f] * k_edge.entries(rev[f], rev[e])
    return float(np.max(np.abs(lhs - rhs)))


def concatenated_pairs(g: Graph) -> tuple:
    """All (w, w') with w in IN(w'), as two index arrays."""
    off = g.wedge_offset
    start = off[g.wedge_second]
    count = off[g.wedge_second + 1] - start
    src = np.repeat(np.arange(g.num_wedges), count)
    dst = np.repeat(start, count) + (np.arange(count.sum()) - np.repeat(np.cumsum(count) - count, count))
    return src, dst


def check_wdb(g: Graph, pi_hat: Measure, k_wedge: Kernel) -> float:
    """max over concatenated (w, w') of |pi(w) P(w, w') - pi(-w') P(-w', -w)|."""
    w, w2 = concatenated_pairs(g)
    rev = g.wedge_reverse
    lhs = pi_hat.values[w] * k_wedge.entries(w, w2)
    rhs = pi_hat.values[rev[w2]] * k_wedge.entries(rev[w2], rev[w])
    return float(np.max(np.abs(lhs - rhs)))


def check_reversal_symmetry(g: Graph, m: Measure) -> float:
    """max |m(s) - m(-s)| for an edge or wedge measure."""
    if m.space == "edge":
        rev = g.edge_reverse
    elif m.space == "wedge":
        rev = g.wedge_reverse
    else:
        raise ValueError(f"reversal is undefined on {m.space!r} measures")
    return float(np.max(np.abs(m.values - m.values[rev])))


@dataclass
class CycleVerdict:
    holds: bool
    worst_cycle: Optional[list]  # directed edges as node pairs
    worst_ratio: float  # |log(prod ON / prod IN)| of the worst cycle
    cycles_checked: int
    max_len: int


def check_cycle_condition(
    g: Graph, params: Params, max_len: int = 8, budget: int = 10**6
) -> CycleVerdict:
    """Compare prod of ON-weights with prod of IN-weights along every edge-chain cycle.

    Cycles are the simple directed cycles of length ``3..max_len`` in the
    support of the alpha = 0 edge chain, i.e. non-backtracking closed walks
    with no repeated directed edge.  Each is enumerated once, rooted at its
    smallest edge index.
    """
    if params.alpha != 0:
        raise PreconditionFailed("cycle condition concerns alpha = 0")
    lam = wedge_weights(g, params)
    if params.is_integral:
        out_w = [int(x) for x in np.bincount(g.wedge_first, weights=lam, minlength=g.num_directed_edges)]
        in_w = [int(x) for x in np.bincount(g.wedge_second, weights=lam, minlength=g.num_directed_edges)]
    else:
        out_w = [Fraction(x) for x in np.bincount(g.wedge_first, weights=lam, minlength=g.num_directed_edges)]
        in_w = [Fraction(x) for x in np.bincount(g.wedge_second, weights=lam, minlength=g.num_directed_edges)]

    succ = [[] for _ in range(g.num_directed_edges)]
    for i, (e, f) in enumerate(zip(g.wedge_first.tolist(), g.wedge_second.tolist())):
        if lam[i] > 0:
            succ[e].append(f)

    checked = 0
    worst = 0.0
    worst_cycle = None
    for root in range(g.num_directed_edges):
        path = [root]
        on_path = {root}
        iters = [iter(succ[root])]
        while iters:
            advanced = False
            for f in iters[-1]:
                if f == root and len(path) >= 3:
                    checked += 1
                    if checked > budget:
                        raise BudgetExceeded(f"more than {budget} cycles up to length {max_len}")
                    po, pi_ = 1, 1
                    for x in path:
                        po *= out_w[x]
                        pi_ *= in_w[x]
                    if po != pi_:
                        r = abs(float(np.log(float(po)) - np.log(float(pi_))))
                        if r > worst:
                            worst = r
                            worst_cycle = list(path)
                elif f > root and f not in on_path and len(path) < max_len:
                    path.append(f)
                    on_path.add(f)
                    iters.append(iter(succ[f]))
                    advanced = True
                    break
            if not advanced:
                iters.pop()
                on_path.discard(path.pop())
    cyc = None
    if worst_cycle is not None:
        cyc = [tuple(g.directed_edge(e)) for e in worst_cycle]
    return CycleVerdict(worst_cycle is None, cyc, worst, checked, max_len)


def check_wedgefact(g: Graph, params: Params) -> float:
    """max over w2 and w1 in IN(w2) of |sum_ON(w2) lambda - sum_IN(-w1) lambda|.

    Both sums are taken over explicitly enumerated neighbour sets.
    """
    lam = wedge_weights(g, params)
    ptr, idx = g.wedges_into_edge
    out_sum = np.add.reduceat(lam, g.wedge_offset[:-1])
    in_sum = np.array([lam[idx[ptr[e]:ptr[e + 1]]].sum() for e in range(g.num_directed_edges)])
    # pairs (w1, w2) with w1 in IN(w2): w1 ranges over IN(e1(w2))
    worst = 0.0
    rev = g.wedge_reverse
    for w2 in range(g.num_wedges):
        e = g.wedge_first[w2]
        for w1 in idx[ptr[e]:ptr[e + 1]]:
            # IN(-w1) is IN of the first edge of -w1
            v = abs(out_sum[e] - in_sum[g.wedge_first[rev[w1]]])
            if v > worst:
                worst = v
    return float(worst)


def edb_implies_invariance(g: Graph, pi: Measure, k_edge: Kernel, tol: float = 1e-10) -> float:
    """Sup-norm of pi K - pi for a measure that satisfies edge directed detailed balance."""
    r = check_edb(g, pi, k_edge)
    if r > tol:
        raise PreconditionFailed(f"measure violates edge directed detailed balance (residual {r:.3e})")
    return invariance_residual(pi, k_edge, ord=np.inf)


def wdb_implies_invariance(g: Graph, pi_hat: Measure, k_wedge: Kernel, tol: float = 1e-10) -> float:
    r = check_wdb(g, pi_hat, k_wedge)
    if r > tol:
        raise PreconditionFailed(f"measure violates wedge directed detailed balance (residual {r:.3e})")
    return invariance_residual(pi_hat, k_wedge, ord=np.inf)


def closed_form_regular(g: Graph, params: Params) -> Measure:
    """lambda(w) / Z on the wedges."""
    lam = wedge_weights(g, params)
    return Measure("wedge", lam / lam.sum())


@dataclass
class BalanceReport:
    edb_residual: float
    wdb_residual: float
    edge_reversal_residual: float
    wedge_reversal_residual: float
    eulerian: bool
    eulerian_violation: float
    eulerian_witness: Optional[tuple]
    regular: bool
    wedgefact_violation: float
    tol: float

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["eulerian_witness"] = list(self.eulerian_witness) if self.eulerian_witness else None
        return d


def balance_report(
    g: Graph, params: Params, pi_edge: Measure, k_edge: Kernel, pi_hat: Measure, k_wedge: Kernel, tol: float = 1e-10
) -> BalanceReport:
    eul = check_eulerianity(g, params)
    return BalanceReport(
        edb_residual=check_edb(g, pi_edge, k_edge),
        wdb_residual=check_wdb(g, pi_hat, k_wedge),
        edge_reversal_residual=check_reversal_symmetry(g, pi_edge),
        wedge_reversal_residual=check_reversal_symmetry(g, pi_hat),
        eulerian=eul.holds,
        eulerian_violation=eul.max_violation,
        eulerian_witness=eul.witness,
        regular=check_regular(g),
        wedgefact_violation=check_wedgefact(g, params),
        tol=tol,
    )
