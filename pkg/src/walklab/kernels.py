"""Edge and wedge transition kernels of the second-order walk."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import DeadEnd, Overflow
from .graph import Graph, Params, kind_counts_per_edge, wedge_weights

EDGE = "edge"
WEDGE = "wedge"
UNDIRECTED = "undirected"

CONSTRUCTION_TOL = 1e-12
VERDICT_TOL = 1e-10
DEFAULT_DENSE_BUDGET = 36_000_000  # dim**2 entries, about 6000 states


@dataclass(frozen=True, eq=False)
class Kernel:
    """Row-stochastic matrix over an indexed state space.

    ``matrix`` is CSR with explicit zeros removed, so the sparsity pattern is
    exactly the support of the chain.
    """

    space: str
    matrix: sparse.csr_matrix

    def __post_init__(self):
        m = sparse.csr_matrix(self.matrix, dtype=float)
        m.eliminate_zeros()
        m.sort_indices()
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=1)).ravel()

    def col_sums(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=0)).ravel()

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def entries(self, rows, cols) -> np.ndarray:
        return np.asarray(self.matrix[np.asarray(rows), np.asarray(cols)]).ravel()

    def row(self, i: int) -> list:
        lo, hi = self.matrix.indptr[i], self.matrix.indptr[i + 1]
        return list(zip(self.matrix.indices[lo:hi].tolist(), self.matrix.data[lo:hi].tolist()))

    def check_stochastic(self, tol: float = CONSTRUCTION_TOL) -> float:
        """Return the maximal row-sum deviation; raise if above ``tol`` or if an entry leaves (0, 1]."""
        data = self.matrix.data
        if data.size and (data.min() <= 0 or data.max() > 1 + tol):
            raise ValueError(f"{self.space} kernel has entries outside (0, 1]")
        dev = float(np.max(np.abs(self.row_sums() - 1.0))) if self.dim else 0.0
        if dev > tol:
            raise ValueError(f"{self.space} kernel rows deviate from 1 by {dev:.3e}")
        return dev


def wedge_probs(g: Graph, params: Params) -> np.ndarray:
    """p(w) = lambda(w) / sum of lambda over ON(w), for every wedge.

    Wedges whose ON-set has zero total weight get ``nan``; they are dead ends.
    """
    lam = wedge_weights(g, params)
    denom = np.bincount(g.wedge_first, weights=lam, minlength=g.num_directed_edges)
    d = denom[g.wedge_first]
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(d > 0, lam / np.where(d > 0, d, 1.0), np.nan)


def wedge_choice_prob(g: Graph, params: Params, w) -> float:
    """Probability of continuing along wedge ``w`` given its first edge was just traversed."""
    from .graph import _wedge_state

    i = _wedge_state(g, w)
    p = wedge_probs(g, params)[i]
    if np.isnan(p):
        raise DeadEnd(f"no admissible move after edge {g.directed_edge(int(g.wedge_first[i]))}", state=g.wedge(i))
    return float(p)


def _dead_end_edges(g, params):
    lam = wedge_weights(g, params)
    denom = np.bincount(g.wedge_first, weights=lam, minlength=g.num_directed_edges)
    return np.flatnonzero(denom <= 0)


def build_edge_kernel(g: Graph, params: Params) -> Kernel:
    """Kernel on directed edges: from (s, u) to (u, v) with probability p((s, u, v))."""
    dead = _dead_end_edges(g, params)
    if dead.size:
        e = int(dead[0])
        raise DeadEnd(f"directed edge {g.directed_edge(e)} has no admissible continuation", state=g.directed_edge(e))
    p = wedge_probs(g, params)
    m = g.num_directed_edges
    k = Kernel(EDGE, sparse.csr_matrix((p, (g.wedge_first, g.wedge_second)), shape=(m, m)))
    k.check_stochastic()
    return k


def build_wedge_kernel(g: Graph, params: Params) -> Kernel:
    """Kernel on wedges: w moves to w' with probability p(w') whenever w's second edge is w''s first."""
    dead = _dead_end_edges(g, params)
    if dead.size:
        e = int(dead[0])
        bad = int(np.flatnonzero(g.wedge_second == e)[0])
        raise DeadEnd(f"wedge {g.wedge(bad)} has no admissible continuation", state=g.wedge(bad))
    p = wedge_probs(g, params)
    off = g.wedge_offset
    # successors of w are the ON-block of its second edge
    start = off[g.wedge_second]
    count = off[g.wedge_second + 1] - start
    rows = np.repeat(np.arange(g.num_wedges), count)
    cols = np.repeat(start, count) + (np.arange(count.sum()) - np.repeat(np.cumsum(count) - count, count))
    nw = g.num_wedges
    k = Kernel(WEDGE, sparse.csr_matrix((p[cols], (rows, cols)), shape=(nw, nw)))
    k.check_stochastic()
    return k


def lazy(k: Kernel) -> Kernel:
    """(I + K) / 2."""
    eye = sparse.identity(k.dim, format="csr")
    return Kernel(k.space, 0.5 * (eye + k.matrix))


def n_step(k: Kernel, n: int, budget: int = DEFAULT_DENSE_BUDGET) -> Kernel:
    """K**n via dense repeated squaring."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if k.dim * k.dim > budget:
        raise Overflow(f"dense power of a {k.dim}-state kernel exceeds the budget of {budget} entries")
    out = np.linalg.matrix_power(k.toarray(), n)
    dev = float(np.max(np.abs(out.sum(axis=1) - 1.0)))
    if dev > 1e-10:
        raise ValueError(f"K^{n} rows deviate from 1 by {dev:.3e}")
    return Kernel(k.space, sparse.csr_matrix(out))


@dataclass
class BistochasticVerdict:
    bistochastic: bool
    max_deviation: float
    column_sums: np.ndarray
    tol: float


def is_bistochastic(k: Kernel, tol: float = VERDICT_TOL) -> BistochasticVerdict:
    cs = k.col_sums()
    dev = float(np.max(np.abs(cs - 1.0))) if cs.size else 0.0
    return BistochasticVerdict(dev <= tol, dev, cs, tol)


def denominator_audit(g: Graph) -> list:
    """For every directed edge, the flat/triangle/open counts of its ON-set.

    The normalising weight of that edge is ``flat*alpha + triangle*beta + open*gamma``.
    """
    return kind_counts_per_edge(g, "out").tolist()


def kernel_to_json(g: Graph, k: Kernel, params: Params) -> str:
    """Debug dump: state labels, sparse rows and the denominator audit trail."""
    if k.space == EDGE:
        labels = g.edge_labels()
    elif k.space == WEDGE:
        labels = g.wedge_labels()
    else:
        labels = [[g.labels[u], g.labels[v]] for u, v in g.edges]
    doc = {
        "space": k.space,
        "dim": k.dim,
        "params": {"alpha": params.alpha, "beta": params.beta, "gamma": params.gamma},
        "states": labels,
        "rows": [[[j, v] for j, v in k.row(i)] for i in range(k.dim)],
        "denominators": [
            {"edge": lab, "flat": c[0], "triangle": c[1], "open": c[2]}
            for lab, c in zip(g.edge_labels(), denominator_audit(g))
        ],
    }
    return json.dumps(doc, default=_json_default)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(type(o))
