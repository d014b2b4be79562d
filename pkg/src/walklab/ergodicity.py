"""Irreducibility, period and the graph-level ergodicity conditions.

States that no transition can enter (zero column in the support) are left
out of every check here: with ``alpha = 0`` the flat wedges are such states,
and a chain started there leaves them after one step and never returns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import DeadEnd, Disconnected, NotIrreducible
from .graph import Graph, Params
from .kernels import Kernel, build_edge_kernel, build_wedge_kernel


def enterable_states(k: Kernel) -> np.ndarray:
    """States with at least one incoming transition."""
    return np.flatnonzero(np.diff(k.matrix.tocsc().indptr) > 0)


def _support(k: Kernel, states=None):
    if states is None:
        states = enterable_states(k)
    states = np.asarray(states, dtype=np.int64)
    sub = k.matrix[states][:, states]
    return sub, states


def is_irreducible(k: Kernel, states=None) -> bool:
    """True iff the support digraph (restricted to ``states``) is strongly connected."""
    sub, states = _support(k, states)
    if len(states) == 0:
        return False
    ncomp, _ = connected_components(sub, directed=True, connection="strong")
    return ncomp == 1


def period(k: Kernel, states=None) -> int:
    """Period of an irreducible support digraph.

    BFS from one state assigns levels; the period is the gcd of
    ``level(u) + 1 - level(v)`` over all arcs ``u -> v``.
    """
    sub, states = _support(k, states)
    ncomp, _ = connected_components(sub, directed=True, connection="strong")
    if len(states) == 0 or ncomp != 1:
        raise NotIrreducible("period is only defined for an irreducible kernel")
    indptr, indices = sub.indptr, sub.indices
    level = np.full(len(states), -1, dtype=np.int64)
    level[0] = 0
    queue = [0]
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for v in indices[indptr[u]:indptr[u + 1]]:
            if level[v] < 0:
                level[v] = level[u] + 1
                queue.append(v)
    rows = np.repeat(np.arange(len(states)), np.diff(indptr))
    diffs = np.abs(level[rows] + 1 - level[indices])
    d = 0
    for x in np.unique(diffs).tolist():
        d = gcd(d, x)
    return int(d)


@dataclass
class ErgodicityVerdict:
    """Measured irreducibility/period next to what the ergodic theorem predicts."""

    space: str
    irreducible: Optional[bool]
    period: Optional[int]
    thm_case: Optional[str]
    predicted_irreducible: Optional[bool]
    predicted_aperiodic: Optional[bool]
    within_hypotheses: bool
    consistent: bool
    witnesses: dict = field(default_factory=dict)
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "irreducible": self.irreducible,
            "period": self.period,
            "thm_case": self.thm_case,
            "predicted_irreducible": self.predicted_irreducible,
            "predicted_aperiodic": self.predicted_aperiodic,
            "within_hypotheses": self.within_hypotheses,
            "consistent": self.consistent,
            "witnesses": self.witnesses,
            "note": self.note,
        }


def _is_cycle_graph(g: Graph) -> bool:
    return bool(np.all(g.degrees == 2))


def check_thm31(g: Graph, params: Params, space: str = "wedge") -> ErgodicityVerdict:
    """Compare the sufficient ergodicity conditions with the measured kernel structure.

    Case ``"i"``: alpha > 0 predicts irreducibility; ``"i+triangle"`` also
    predicts aperiodicity.  Case ``"ii"``: alpha = 0 with min degree >= 2 and
    max degree > 2 predicts irreducibility.  Outside these hypotheses nothing is
    predicted but the measurements are still reported.
    """
    if not g.is_connected():
        raise Disconnected("ergodicity check needs a connected graph")
    has_tri = g.has_triangle()
    dmin, dmax = int(g.degrees.min()), int(g.degrees.max())
    witnesses = {
        "has_triangle": has_tri,
        "min_degree": dmin,
        "max_degree": dmax,
        "is_cycle_graph": _is_cycle_graph(g),
    }
    if dmin < 2:
        witnesses["min_degree_violator"] = int(np.argmin(g.degrees))

    case = None
    pred_irr = pred_aper = None
    if params.alpha > 0:
        case = "i+triangle" if has_tri else "i"
        pred_irr = True
        pred_aper = True if has_tri else None
    elif dmin >= 2 and dmax > 2:
        case = "ii"
        pred_irr = True

    build = build_wedge_kernel if space == "wedge" else build_edge_kernel
    note = ""
    try:
        k = build(g, params)
    except DeadEnd as exc:
        irr, per = None, None
        note = f"kernel not stochastic: {exc}"
    else:
        irr = is_irreducible(k)
        per = period(k) if irr else None

    consistent = True
    if pred_irr and irr is not True:
        consistent = False
    if pred_aper and per != 1:
        consistent = False
    if case is None and not note:
        note = "outside theorem hypotheses"
    return ErgodicityVerdict(space, irr, per, case, pred_irr, pred_aper, case is not None, consistent, witnesses, note)


# ----------------------------------------------------------------------------
# alpha = 0 aperiodicity versus graph aperiodicity


def simple_cycle_lengths(g: Graph, max_len: Optional[int] = None) -> set:
    """Lengths of all simple cycles (length >= 3) of an undirected graph, by DFS.

    Each cycle is rooted at its smallest node, so exponential in the worst case;
    intended for small graphs.
    """
    max_len = g.n if max_len is None else max_len
    lengths = set()
    adj = g.adjacency
    for root in range(g.n):
        stack = [(root, iter(adj[root]))]
        on_path = {root}
        while stack:
            v, it = stack[-1]
            advanced = False
            for u in it:
                if u == root and len(stack) >= 3:
                    lengths.add(len(stack))
                elif u > root and u not in on_path and len(stack) < max_len:
                    on_path.add(u)
                    stack.append((u, iter(adj[u])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                on_path.discard(v)
    return lengths


def graph_is_aperiodic(g: Graph) -> bool:
    """True iff the gcd of the simple-cycle lengths of ``g`` is one."""
    d = 0
    for length in simple_cycle_lengths(g):
        d = gcd(d, length)
    return d == 1


def aperiodic_graph_conjecture_check(g: Graph, params: Params = None) -> tuple:
    """Return ``(graph aperiodic, alpha=0 wedge kernel aperiodic)`` for side-by-side comparison."""
    params = params or Params(0.0, 1.0, 1.0)
    if params.alpha != 0:
        raise ValueError("the comparison concerns the alpha = 0 walk")
    k = build_wedge_kernel(g, params)
    if not is_irreducible(k):
        raise NotIrreducible("alpha = 0 wedge kernel is reducible on this graph")
    return graph_is_aperiodic(g), period(k) == 1
