"""Finite-graph machinery behind the recurrence comparison.

The edge chain is conditioned on not taking a guaranteed backtrack of
probability ``p``, made lazy, and then subsampled at geometric times to give a
chain on undirected edges.  Under edge directed detailed balance that
collapsed chain is reversible, so it can be read as an electrical network.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from ._parallel import map_ordered
from .errors import (
    DeadEnd,
    Disconnected,
    HypothesisViolated,
    NegativeEntry,
    NoCycleInBall,
    NotIrreducible,
    SolveFailure,
    ZeroBacktrack,
)
from .generators import regular_tree, triangular_patch
from .graph import Graph, Params, bfs_distances, induced_subgraph_edges
from .kernels import EDGE, UNDIRECTED, Kernel, build_edge_kernel, lazy
from .stationary import Measure, stationary

log = logging.getLogger(__name__)

ENTRY_TOL = 1e-14


def backtrack_floor(g: Graph, k_edge: Kernel) -> float:
    """p = min over directed edges e of P(e, -e)."""
    back = k_edge.entries(np.arange(g.num_directed_edges), g.edge_reverse)
    p = float(back.min())
    if p <= 0:
        raise ZeroBacktrack("some directed edge never backtracks (alpha = 0)")
    return p


def build_K(g: Graph, k_edge: Kernel, p: float) -> Kernel:
    """Edge kernel conditioned on the p-coin failing: (P - p * R) / (1 - p), R the reversal map."""
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    m = g.num_directed_edges
    back = k_edge.entries(np.arange(m), g.edge_reverse)
    if np.any(back - p < -ENTRY_TOL):
        e = int(np.argmin(back - p))
        raise NegativeEntry(f"p = {p} exceeds the backtrack probability {back[e]} of edge {g.directed_edge(e)}")
    rev = sparse.csr_matrix((np.full(m, p), (np.arange(m), g.edge_reverse)), shape=(m, m))
    mat = (k_edge.matrix - rev) / (1.0 - p)
    mat = mat.tocsr()
    mat.data[np.abs(mat.data) <= ENTRY_TOL] = 0.0
    return Kernel(k_edge.space, mat)


def orientation_map(g: Graph) -> sparse.csr_matrix:
    """|E_dir| x |E| indicator of which undirected edge each directed edge lies on."""
    m = g.num_directed_edges
    return sparse.csr_matrix((np.ones(m), (np.arange(m), g.edge_undirected)), shape=(m, g.num_edges))


def collapse_to_undirected(g: Graph, k_lazy: Kernel, p: float, pi_edge: Measure) -> tuple:
    """Collapsed kernel on undirected edges and its measure.

    Kbar(x, y) = 1/2 * sum over orientations e1 of x, e2 of y of
    [p (I - (1-p) K_L)^{-1}](e1, e2); pi_bar(x) = pi(e) + pi(-e).
    """
    m = k_lazy.dim
    a = np.eye(m) - (1.0 - p) * k_lazy.toarray()
    try:
        green = np.linalg.solve(a, np.eye(m))
    except np.linalg.LinAlgError as exc:
        raise SolveFailure(str(exc)) from exc
    c = orientation_map(g).toarray()
    kbar = 0.5 * p * (c.T @ green @ c)
    neg = kbar < 0
    if np.any(neg):
        if kbar.min() < -ENTRY_TOL:
            raise SolveFailure(f"collapsed kernel has entry {kbar.min():.3e}")
        log.warning("clamping %d tiny negative collapsed-kernel entries to 0", int(neg.sum()))
        kbar[neg] = 0.0
    pibar = c.T @ pi_edge.values
    return Kernel(UNDIRECTED, sparse.csr_matrix(kbar)), Measure(UNDIRECTED, pibar)


def collapse_series(g: Graph, k_lazy: Kernel, p: float, terms: int = 200) -> np.ndarray:
    """Truncated geometric series sum_{i <= terms} of the collapsed kernel (dense)."""
    kl = k_lazy.toarray()
    c = orientation_map(g).toarray()
    acc = np.zeros_like(kl)
    power = np.eye(kl.shape[0])
    w = p
    for _ in range(terms + 1):
        acc += w * power
        power = power @ kl
        w *= 1.0 - p
    return 0.5 * (c.T @ acc @ c)


def reversibility_residual(kbar: Kernel, pibar: Measure) -> float:
    """max |pi(x) K(x, y) - pi(y) K(y, x)|."""
    flow = pibar.values[:, None] * kbar.toarray()
    return float(np.max(np.abs(flow - flow.T)))


def verify_nstep_directed_balance(g: Graph, pi_edge: Measure, k_edge: Kernel, n_max: int = 5) -> float:
    """max over 1 <= n <= n_max and (e, e') of |pi(e) P^n(e, e') - pi(e') P^n(-e', -e)|."""
    pk = k_edge.toarray()
    rev = g.edge_reverse
    pi = pi_edge.values
    cur = np.eye(len(pi))
    worst = 0.0
    for _ in range(n_max):
        cur = cur @ pk
        lhs = pi[:, None] * cur
        rhs = (pi[:, None] * cur[np.ix_(rev, rev)]).T
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


# ----------------------------------------------------------------------------
# alpha = 0


@dataclass
class AlphaZeroSetup:
    M: int
    p: float
    D: Kernel
    max_degree: int
    ball_radius: int
    min_return_mass: float  # min over e of D(e, -e)


def _ball_has_cycle(g: Graph, dist: np.ndarray, radius: int) -> bool:
    nodes = np.flatnonzero((dist >= 0) & (dist <= radius))
    edges = induced_subgraph_edges(g, nodes.tolist())
    # a forest on k nodes with c components has k - c edges
    local = {v: i for i, v in enumerate(nodes.tolist())}
    if not edges:
        return False
    rows = [local[u] for u, _ in edges]
    cols = [local[v] for _, v in edges]
    adj = sparse.csr_matrix((np.ones(len(edges)), (rows, cols)), shape=(len(nodes), len(nodes)))
    ncomp, _ = connected_components(adj, directed=False)
    return len(edges) > len(nodes) - ncomp


def alpha_zero_setup(g: Graph, params: Params, R_cap: Optional[int] = None) -> AlphaZeroSetup:
    """Return-path bound M, floor p and averaged kernel D for the non-backtracking case.

    M is the largest, over directed edges e, BFS distance (in steps of the
    edge chain) from e to -e.  With r = min(b, g) / (min(b, g) + (d-1) max(b, g))
    and d the maximal degree, p = r**M / (2 (M + 1)) and
    D = (M + 1)^{-1} sum_{i=0}^{M} P^i, which satisfies D(e, -e) >= 2p.
    """
    if params.alpha != 0:
        raise ValueError("alpha_zero_setup needs alpha = 0")
    if g.degrees.min() < 2:
        v = int(np.argmin(g.degrees))
        raise DeadEnd(f"node {v} has degree {int(g.degrees[v])} < 2", state=v)
    if not g.is_connected():
        raise Disconnected("alpha_zero_setup needs a connected graph")
    radius = R_cap
    if radius is None:
        radius = g.n
    for x in range(g.n):
        if not _ball_has_cycle(g, bfs_distances(g, x), radius):
            raise NoCycleInBall(f"ball of radius {radius} around node {x} contains no cycle")
    k = build_edge_kernel(g, params)
    mat = k.matrix
    m = g.num_directed_edges
    dist = _edge_chain_distances(mat)
    back = dist[np.arange(m), g.edge_reverse]
    if np.any(back < 0):
        e = int(np.flatnonzero(back < 0)[0])
        raise NotIrreducible(f"edge chain cannot reach {g.directed_edge(g.edge_reverse[e])} from {g.directed_edge(e)}")
    M = int(back.max())
    d = int(g.degrees.max())
    lo, hi = min(params.beta, params.gamma), max(params.beta, params.gamma)
    r = lo / (lo + (d - 1) * hi)
    p = r**M / (2 * (M + 1))
    pk = k.toarray()
    acc = np.eye(m)
    power = np.eye(m)
    for _ in range(M):
        power = power @ pk
        acc += power
    dmat = acc / (M + 1)
    ret = dmat[np.arange(m), g.edge_reverse]
    if np.any(ret < 2 * p * (1 - 1e-12)):
        raise HypothesisViolated(f"D(e, -e) = {ret.min():.3e} < 2p = {2 * p:.3e}")
    return AlphaZeroSetup(M, p, Kernel(EDGE, sparse.csr_matrix(dmat)), d, radius, float(ret.min()))


def _edge_chain_distances(mat: sparse.csr_matrix) -> np.ndarray:
    """All-pairs BFS step counts on the support (-1 where unreachable); 0 only on the diagonal."""
    from scipy.sparse.csgraph import shortest_path

    support = mat.copy()
    support.data[:] = 1.0
    dist = shortest_path(support, method="D", unweighted=True)
    dist[np.isinf(dist)] = -1
    return dist.astype(np.int64)


# ----------------------------------------------------------------------------
# auxiliary chain bundle


@dataclass
class AuxChain:
    mode: str  # "alpha_positive" or "alpha_zero"
    p: float
    K: Kernel
    K_lazy: Kernel
    K_bar: Kernel
    pi_edge: Measure
    pi_bar: Measure
    reversibility_residual: float
    alpha_zero: Optional[AlphaZeroSetup] = None
    notes: list = field(default_factory=list)


def build_aux_chain(g: Graph, params: Params, pi_edge: Measure = None, R_cap: Optional[int] = None) -> AuxChain:
    k_edge = build_edge_kernel(g, params)
    if pi_edge is None:
        pi_edge = stationary(k_edge)
    notes = []
    if params.alpha > 0:
        p = backtrack_floor(g, k_edge)
        base = k_edge
        setup = None
        if g.degrees.min() < 2:
            notes.append("graph has degree-one nodes; the alpha > 0 construction still applies")
        mode = "alpha_positive"
    else:
        setup = alpha_zero_setup(g, params, R_cap)
        p = setup.p
        base = setup.D
        mode = "alpha_zero"
    K = build_K(g, base, p)
    kl = lazy(K)
    kbar, pibar = collapse_to_undirected(g, kl, p, pi_edge)
    res = reversibility_residual(kbar, pibar)
    return AuxChain(mode, p, K, kl, kbar, pi_edge, pibar, res, setup, notes)


# ----------------------------------------------------------------------------
# electrical networks


@dataclass
class Network:
    """Symmetric conductance matrix on nodes ``0..n-1`` (zero means no edge)."""

    conductance: sparse.csr_matrix

    def __post_init__(self):
        c = sparse.csr_matrix(self.conductance, dtype=float)
        c.eliminate_zeros()
        if c.shape[0] != c.shape[1]:
            raise ValueError("conductance matrix must be square")
        if c.data.size and c.data.min() < 0:
            raise ValueError("conductances must be positive")
        if abs(c - c.T).max() > 1e-12 * max(1.0, abs(c).max()):
            raise ValueError("conductances must be symmetric")
        c.setdiag(0)
        c.eliminate_zeros()
        self.conductance = c

    @property
    def n(self) -> int:
        return self.conductance.shape[0]

    @classmethod
    def from_graph(cls, g: Graph, weights=None) -> "Network":
        w = np.ones(g.num_directed_edges) if weights is None else np.asarray(weights, dtype=float)
        return cls(sparse.csr_matrix((w, (g.edge_tail, g.edge_head)), shape=(g.n, g.n)))

    def laplacian(self) -> sparse.csr_matrix:
        deg = np.asarray(self.conductance.sum(axis=1)).ravel()
        return (sparse.diags(deg) - self.conductance).tocsr()

    def glue(self, groups) -> tuple:
        """Contract each group of nodes into one node; returns the new network and the group ids."""
        label = np.arange(self.n)
        merged = []
        for grp in groups:
            grp = np.asarray(grp, dtype=np.int64)
            label[grp] = -1 - len(merged)
            merged.append(grp)
        keep = np.flatnonzero(label >= 0)
        new = np.empty(self.n, dtype=np.int64)
        new[keep] = np.arange(len(keep))
        for i, grp in enumerate(merged):
            new[grp] = len(keep) + i
        proj = sparse.csr_matrix((np.ones(self.n), (np.arange(self.n), new)), shape=(self.n, len(keep) + len(merged)))
        c = (proj.T @ self.conductance @ proj).tolil()
        c.setdiag(0)
        ids = [len(keep) + i for i in range(len(merged))]
        return Network(c.tocsr()), ids


def effective_resistance(net: Network, a: int, b: int) -> float:
    """Voltage at ``a`` when unit current enters at ``a`` and ``b`` is grounded."""
    if a == b:
        raise ValueError("a and b must differ")
    ncomp, lab = connected_components(net.conductance, directed=False)
    if lab[a] != lab[b]:
        raise Disconnected(f"nodes {a} and {b} are not connected")
    comp = np.flatnonzero(lab == lab[a])
    lap = net.laplacian()[comp][:, comp]
    pos = {v: i for i, v in enumerate(comp.tolist())}
    keep = [i for i in range(len(comp)) if i != pos[b]]
    red = lap[keep][:, keep].tocsc()
    rhs = np.zeros(len(keep))
    ia = keep.index(pos[a])
    rhs[ia] = 1.0
    from scipy.sparse.linalg import spsolve

    v = spsolve(red, rhs)
    return float(np.atleast_1d(v)[ia])


# ----------------------------------------------------------------------------
# growth experiment


@dataclass
class GrowthRow:
    size: int
    R_srw: float
    R_kbar: float
    ratio: float
    kbar_reversibility: float


def kbar_network(g: Graph, aux: AuxChain) -> Network:
    """Network on undirected edges with conductance pi_bar(x) Kbar(x, y), symmetrised."""
    flow = aux.pi_bar.values[:, None] * aux.K_bar.toarray()
    c = 0.5 * (flow + flow.T)
    np.fill_diagonal(c, 0.0)
    return Network(sparse.csr_matrix(c))


def _family_patch(family: str, radius: int):
    if family == "triangular":
        return triangular_patch(radius)
    if family in ("tree3", "tree"):
        return regular_tree(3, radius)
    raise ValueError(f"unknown lattice family {family!r}")


def recurrence_proxy_experiment(family: str, sizes, params: Params) -> list:
    """Resistance from the centre to the glued outer sphere, for growing patches.

    Column ``R_srw`` uses unit conductances on the patch.  Column ``R_kbar``
    uses the collapsed-chain network on undirected edges, from the edges at the
    centre to the glued edges touching the outer sphere.
    """
    def one(radius):
        g, center, boundary = _family_patch(family, radius)
        if params.alpha == 0 and g.degrees.min() < 2:
            raise HypothesisViolated(f"{g.name} has degree-one nodes, not allowed with alpha = 0")
        srw = Network.from_graph(g)
        glued, (sink,) = srw.glue([boundary])
        # surviving nodes keep their relative order, so the centre's new id is its rank among them
        center_new = int(np.searchsorted(np.setdiff1d(np.arange(g.n), boundary), center))
        r_srw = effective_resistance(glued, center_new, sink)

        aux = build_aux_chain(g, params)
        net = kbar_network(g, aux)
        bset = set(boundary.tolist())
        src_edges = [i for i, (u, v) in enumerate(g.edges) if center in (u, v)]
        dst_edges = [i for i, (u, v) in enumerate(g.edges) if u in bset or v in bset]
        if set(src_edges) & set(dst_edges):
            raise HypothesisViolated(f"radius {radius} is too small: centre edges touch the boundary")
        glued_k, (src, dst) = net.glue([src_edges, dst_edges])
        r_k = effective_resistance(glued_k, src, dst)
        return GrowthRow(int(radius), r_srw, r_k, r_k / r_srw, aux.reversibility_residual)

    return map_ordered(one, sizes)


def growth_table_csv(rows) -> str:
    lines = ["size,R_srw,R_kbar,ratio"]
    lines += [f"{r.size},{r.R_srw!r},{r.R_kbar!r},{r.ratio!r}" for r in rows]
    return "\n".join(lines) + "\n"


def tree_resistance_to_infinity(degree: int = 3) -> float:
    """Resistance from the root to infinity of the infinite ``degree``-regular tree with unit edges.

    Level k (k >= 1) has degree * (degree-1)**(k-1) parallel unit edges in series
    with the next level, so the sum is geometric.
    """
    b = degree - 1
    return (1.0 / degree) * b / (b - 1)


def first_return_frequency(g: Graph, params: Params, start_node: int, horizon: int, walks: int, base_seed: int) -> float:
    """Fraction of ``walks`` independent walks from ``start_node`` that revisit it within ``horizon`` steps.

    Walk ``i`` uses seed ``base_seed + i`` and starts along the edge to the
    smallest-index neighbour chosen uniformly by that same generator.
    """
    from .simulate import walk

    hits = 0
    for i in range(walks):
        rng = np.random.default_rng(base_seed + i)
        nb = g.adjacency[start_node][int(rng.integers(len(g.adjacency[start_node])))]
        tr = walk(g, params, (start_node, nb), horizon, seed=base_seed + i)
        if np.any(tr.nodes[2:] == start_node):
            hits += 1
    return hits / walks
