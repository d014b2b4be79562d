"""Stationary measures on wedges, directed edges and nodes, and the relations between them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import sparse

from .errors import NoConvergence, NotErgodic, NotIrreducible
from .ergodicity import is_irreducible, period
from .graph import Graph, Params
from .kernels import EDGE, UNDIRECTED, WEDGE, Kernel, wedge_probs

NODE = "node"
DEFAULT_DIRECT_CAP = 20_000


@dataclass(frozen=True, eq=False)
class Measure:
    space: str
    values: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if np.any(v < 0):
            raise ValueError("measure has negative entries")
        if self.normalized and abs(v.sum() - 1.0) > 1e-10:
            raise ValueError(f"normalized measure sums to {v.sum()!r}")

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def to_dict(self, g: Graph = None) -> dict:
        out = {"space": self.space, "values": self.values.tolist()}
        if g is not None:
            out["states"] = state_labels(g, self.space)
        return out


def state_labels(g: Graph, space: str) -> list:
    if space == NODE:
        return list(g.labels)
    if space == EDGE:
        return g.edge_labels()
    if space == WEDGE:
        return g.wedge_labels()
    if space == UNDIRECTED:
        return [[g.labels[u], g.labels[v]] for u, v in g.edges]
    raise ValueError(space)


def _clean(pi: np.ndarray) -> np.ndarray:
    pi = np.where(np.abs(pi) < 1e-15, 0.0, pi)
    if np.any(pi < 0):
        raise NotIrreducible("solution has negative entries; chain has no unique invariant measure")
    return pi / pi.sum()


def stationary(
    k: Kernel,
    method: str = "direct",
    tol: float = 1e-10,
    max_iter: int = 10**6,
    direct_cap: int = DEFAULT_DIRECT_CAP,
) -> Measure:
    """Invariant probability vector of an irreducible kernel.

    ``direct`` solves ``(K^T - I) pi = 0`` with the last equation replaced by
    ``sum(pi) = 1`` (LU with partial pivoting); above ``direct_cap`` states it
    falls back to ``power``.  ``power`` iterates from the uniform vector until
    successive iterates differ by less than ``tol`` in l1, and refuses
    periodic kernels.
    """
    if not is_irreducible(k):
        raise NotIrreducible(f"{k.space} kernel is not irreducible")
    if method == "direct" and k.dim <= direct_cap:
        a = k.toarray().T - np.eye(k.dim)
        a[-1, :] = 1.0
        b = np.zeros(k.dim)
        b[-1] = 1.0
        pi = _clean(np.linalg.solve(a, b))
    elif method in ("direct", "power"):
        if period(k) != 1:
            raise NotErgodic("power iteration needs an aperiodic kernel")
        pt = k.matrix.T.tocsr()
        pi = np.full(k.dim, 1.0 / k.dim)
        for it in range(1, max_iter + 1):
            nxt = pt @ pi
            diff = np.abs(nxt - pi).sum()
            pi = nxt
            if diff < tol:
                break
        else:
            raise NoConvergence(max_iter, diff)
        pi = _clean(pi)
    else:
        raise ValueError(f"unknown method {method!r}")
    return Measure(k.space, pi)


def invariance_residual(m: Measure, k: Kernel, ord=1) -> float:
    """Norm of ``m K - m``."""
    r = k.matrix.T @ m.values - m.values
    return float(np.linalg.norm(r, ord=ord))


def verify_simplified_invariance(g: Graph, params: Params, pi_hat: Measure) -> float:
    """max_w |pi(w) - p(w) * sum over IN(w) of pi|, evaluated from the in-neighbour sets."""
    v = np.asarray(pi_hat.values, dtype=float)
    p = wedge_probs(g, params)
    inflow = np.bincount(g.wedge_second, weights=v, minlength=g.num_directed_edges)
    # IN(w) are the wedges whose second edge is w's first edge
    rhs = p * inflow[g.wedge_first]
    return float(np.max(np.abs(v - rhs)))


def pullback(g: Graph, m: Measure, target: str) -> Measure:
    """Push a wedge (or edge) measure down to directed edges or nodes.

    Edges: pi(e) = sum of pi over wedges ending in e.  Nodes: pi(v) = sum over
    wedges (or edges) ending at v.
    """
    v = m.values
    if m.space == WEDGE:
        if target == EDGE:
            out = np.bincount(g.wedge_second, weights=v, minlength=g.num_directed_edges)
        elif target == NODE:
            out = np.bincount(g.wedge_nodes[:, 2], weights=v, minlength=g.n)
        else:
            raise ValueError(f"cannot pull a wedge measure back to {target!r}")
    elif m.space == EDGE and target == NODE:
        out = np.bincount(g.edge_head, weights=v, minlength=g.n)
    else:
        raise ValueError(f"cannot pull a {m.space} measure back to {target!r}")
    return Measure(target, out, normalized=m.normalized)


def wedge_measure_from_edges(g: Graph, pi_edge: Measure, k_edge: Kernel) -> Measure:
    """pi(w) = pi_edge(e1(w)) * P(e1(w), e2(w))."""
    pe = k_edge.entries(g.wedge_first, g.wedge_second)
    return Measure(WEDGE, pi_edge.values[g.wedge_first] * pe, normalized=pi_edge.normalized)


def verify_edge_wedge_product(g: Graph, pi_edge: Measure, k_edge: Kernel, pi_hat: Measure) -> float:
    """max_w |pi_hat(w) - pi_edge(e1(w)) P(e1(w), e2(w))|."""
    built = wedge_measure_from_edges(g, pi_edge, k_edge)
    return float(np.max(np.abs(pi_hat.values - built.values)))


def total_variation(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


@dataclass
class LimitReport:
    n: int
    starts: list
    node_measures: np.ndarray
    stationary_nodes: np.ndarray
    tv_to_stationary: np.ndarray
    max_tv: float
    max_pairwise_tv: float


def limiting_distribution_empirical(g: Graph, k: Kernel, starts: Sequence[int] = None, n: int = 100) -> LimitReport:
    """Rows of K**n from the given start states, pulled back to nodes and compared with the stationary node law."""
    if not is_irreducible(k) or period(k) != 1:
        raise NotErgodic("limit distribution needs an irreducible aperiodic kernel")
    if starts is None:
        starts = range(k.dim)
    starts = list(starts)
    pi = stationary(k)
    target = pullback(g, pi, NODE).values
    rows = sparse.csr_matrix(
        (np.ones(len(starts)), (np.arange(len(starts)), starts)), shape=(len(starts), k.dim)
    ).toarray()
    pt = k.matrix.T.tocsr()
    cur = rows.T
    for _ in range(n):
        cur = pt @ cur
    node_key = g.wedge_nodes[:, 2] if k.space == WEDGE else g.edge_head
    nodes = np.zeros((len(starts), g.n))
    for j in range(len(starts)):
        nodes[j] = np.bincount(node_key, weights=cur[:, j], minlength=g.n)
    tv = 0.5 * np.abs(nodes - target).sum(axis=1)
    pair = 0.0
    for j in range(len(starts)):
        pair = max(pair, float(0.5 * np.abs(nodes - nodes[j]).sum(axis=1).max()))
    return LimitReport(n, starts, nodes, target, tv, float(tv.max()), pair)
