"""Simple undirected graphs and their directed-edge / directed-wedge lifts.

Directed edges and wedges are indexed in lexicographic order of their node
tuples.  Because neighbour lists are sorted, the edges leaving a node form a
contiguous block, and so do the wedges sharing a first edge; all index
arithmetic below relies on that layout.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    DuplicateEdge,
    InvalidGraph,
    Malformed,
    SelfLoop,
    UnknownState,
)


class WedgeKind(IntEnum):
    FLAT = 0
    TRIANGLE = 1
    OPEN = 2


class DirectedEdge(NamedTuple):
    tail: int
    head: int

    def reverse(self) -> "DirectedEdge":
        return DirectedEdge(self.head, self.tail)


class Wedge(NamedTuple):
    a: int
    b: int
    c: int
    kind: WedgeKind

    @property
    def first(self) -> DirectedEdge:
        return DirectedEdge(self.a, self.b)

    @property
    def second(self) -> DirectedEdge:
        return DirectedEdge(self.b, self.c)

    def reverse(self) -> "Wedge":
        return Wedge(self.c, self.b, self.a, self.kind)


@dataclass(frozen=True)
class Params:
    """Walk weights: ``alpha`` for backtracking, ``beta`` for moves closing a
    triangle with the previous node, ``gamma`` for every other move."""

    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be a finite nonnegative number, got {v!r}")
        if self.beta <= 0 or self.gamma <= 0:
            raise ValueError("beta and gamma must be strictly positive")

    @property
    def weights(self) -> np.ndarray:
        """Weights indexed by :class:`WedgeKind`."""
        return np.array([self.alpha, self.beta, self.gamma], dtype=float)

    @property
    def is_integral(self) -> bool:
        return all(float(v).is_integer() for v in (self.alpha, self.beta, self.gamma))

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph on nodes ``0..n-1``.

    ``labels[i]`` is the original label of node ``i`` (input order of first
    appearance for loaded graphs).
    """

    adjacency: tuple
    labels: tuple = None
    name: str = ""

    def __post_init__(self):
        adj = tuple(tuple(int(u) for u in nbrs) for nbrs in self.adjacency)
        object.__setattr__(self, "adjacency", adj)
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(range(len(adj))))
        elif len(self.labels) != len(adj):
            raise InvalidGraph("one label per node required")
        n = len(adj)
        for v, nbrs in enumerate(adj):
            if not nbrs:
                raise InvalidGraph(f"node {v} has degree 0")
            for i, u in enumerate(nbrs):
                if u == v:
                    raise InvalidGraph(f"self-loop at node {v}")
                if not 0 <= u < n:
                    raise InvalidGraph(f"neighbour {u} of node {v} out of range")
                if i and nbrs[i - 1] >= u:
                    raise InvalidGraph(f"neighbour list of node {v} not strictly increasing")
        for v, nbrs in enumerate(adj):
            for u in nbrs:
                if not _contains(adj[u], v):
                    raise InvalidGraph(f"asymmetric adjacency between {v} and {u}")

    @classmethod
    def from_edges(cls, n: int, edges, labels=None, name: str = "") -> "Graph":
        nbrs = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise InvalidGraph(f"self-loop at node {u}")
            if v in nbrs[u]:
                raise InvalidGraph(f"duplicate edge {{{u}, {v}}}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(tuple(tuple(sorted(s)) for s in nbrs), labels=labels, name=name)

    # -- basic structure -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.adjacency)

    def __len__(self):
        return self.n

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<Graph{tag} n={self.n} m={self.num_edges}>"

    def neighbors(self, v: int) -> tuple:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and _contains(self.adjacency[u], v)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    @cached_property
    def edges(self) -> list:
        """Undirected edges as sorted pairs ``(u, v)`` with ``u < v``, lexicographic."""
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    @property
    def num_edges(self) -> int:
        return int(self.degrees.sum()) // 2

    def is_connected(self) -> bool:
        ncomp, _ = connected_components(self.adjacency_matrix(), directed=False)
        return ncomp == 1

    def adjacency_matrix(self) -> csr_matrix:
        return csr_matrix(
            (np.ones(len(self.edge_tail)), (self.edge_tail, self.edge_head)),
            shape=(self.n, self.n),
        )

    def has_triangle(self) -> bool:
        return bool(np.any(self.wedge_kind == WedgeKind.TRIANGLE))

    # -- directed edges --------------------------------------------------

    @cached_property
    def edge_offset(self) -> np.ndarray:
        """``edge_offset[v]:edge_offset[v+1]`` are the directed edges with tail ``v``."""
        off = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=off[1:])
        return off

    @cached_property
    def edge_tail(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)

    @cached_property
    def edge_head(self) -> np.ndarray:
        return np.fromiter(
            (u for nbrs in self.adjacency for u in nbrs), dtype=np.int64, count=int(self.degrees.sum())
        )

    @cached_property
    def edge_reverse(self) -> np.ndarray:
        return np.array(
            [self.edge_index(h, t) for t, h in zip(self.edge_tail.tolist(), self.edge_head.tolist())],
            dtype=np.int64,
        )

    @cached_property
    def edge_undirected(self) -> np.ndarray:
        """Index into :attr:`edges` of the undirected edge under each directed edge."""
        lookup = {e: i for i, e in enumerate(self.edges)}
        return np.array(
            [lookup[(min(t, h), max(t, h))] for t, h in zip(self.edge_tail.tolist(), self.edge_head.tolist())],
            dtype=np.int64,
        )

    @property
    def num_directed_edges(self) -> int:
        return len(self.edge_tail)

    def edge_index(self, tail: int, head: int) -> int:
        if not 0 <= tail < self.n:
            raise UnknownState(f"no directed edge ({tail}, {head})")
        nbrs = self.adjacency[tail]
        k = bisect_left(nbrs, head)
        if k == len(nbrs) or nbrs[k] != head:
            raise UnknownState(f"no directed edge ({tail}, {head})")
        return int(self.edge_offset[tail]) + k

    def directed_edge(self, i: int) -> DirectedEdge:
        return DirectedEdge(int(self.edge_tail[i]), int(self.edge_head[i]))

    # -- wedges ------------------------------------------------------------

    @cached_property
    def wedge_offset(self) -> np.ndarray:
        """``wedge_offset[e]:wedge_offset[e+1]`` are the wedges whose first edge is ``e``."""
        off = np.zeros(self.num_directed_edges + 1, dtype=np.int64)
        np.cumsum(self.degrees[self.edge_head], out=off[1:])
        return off

    @cached_property
    def wedge_first(self) -> np.ndarray:
        return np.repeat(np.arange(self.num_directed_edges, dtype=np.int64), self.degrees[self.edge_head])

    @cached_property
    def wedge_second(self) -> np.ndarray:
        # the k-th wedge of the block of e=(a,b) continues along the k-th edge out of b
        first = self.wedge_first
        local = np.arange(len(first), dtype=np.int64) - self.wedge_offset[first]
        return self.edge_offset[self.edge_head[first]] + local

    @property
    def num_wedges(self) -> int:
        return len(self.wedge_first)

    @cached_property
    def wedge_nodes(self) -> np.ndarray:
        """``(|W|, 3)`` array of node triples."""
        a = self.edge_tail[self.wedge_first]
        b = self.edge_head[self.wedge_first]
        c = self.edge_head[self.wedge_second]
        return np.stack([a, b, c], axis=1)

    @cached_property
    def wedge_kind(self) -> np.ndarray:
        kinds = np.empty(self.num_wedges, dtype=np.int8)
        adj = self.adjacency
        for i, (a, _, c) in enumerate(self.wedge_nodes.tolist()):
            if a == c:
                kinds[i] = WedgeKind.FLAT
            elif _contains(adj[a], c):
                kinds[i] = WedgeKind.TRIANGLE
            else:
                kinds[i] = WedgeKind.OPEN
        return kinds

    @cached_property
    def wedge_reverse(self) -> np.ndarray:
        rev_first = self.edge_reverse[self.wedge_second]
        a = self.wedge_nodes[:, 0]
        b = self.wedge_nodes[:, 1]
        # position of a among the neighbours of b
        local = np.array([bisect_left(self.adjacency[bb], aa) for aa, bb in zip(a.tolist(), b.tolist())], dtype=np.int64)
        return self.wedge_offset[rev_first] + local

    @cached_property
    def wedges_into_edge(self) -> tuple:
        """CSR pair ``(ptr, idx)``: ``idx[ptr[e]:ptr[e+1]]`` are the wedges whose second edge is ``e``."""
        order = np.argsort(self.wedge_second, kind="stable")
        counts = np.bincount(self.wedge_second, minlength=self.num_directed_edges)
        ptr = np.zeros(self.num_directed_edges + 1, dtype=np.int64)
        np.cumsum(counts, out=ptr[1:])
        return ptr, order

    def wedge_index(self, a: int, b: int, c: int) -> int:
        e = self.edge_index(a, b)
        nbrs = self.adjacency[b]
        k = bisect_left(nbrs, c)
        if k == len(nbrs) or nbrs[k] != c:
            raise UnknownState(f"no wedge ({a}, {b}, {c})")
        return int(self.wedge_offset[e]) + k

    def wedge(self, i: int) -> Wedge:
        a, b, c = self.wedge_nodes[i].tolist()
        return Wedge(a, b, c, WedgeKind(int(self.wedge_kind[i])))

    def kind_counts(self) -> dict:
        counts = np.bincount(self.wedge_kind, minlength=3)
        return {k.name.lower(): int(counts[k]) for k in WedgeKind}

    # -- labels for reports -------------------------------------------------

    def edge_labels(self) -> list:
        return [[self.labels[t], self.labels[h]] for t, h in zip(self.edge_tail.tolist(), self.edge_head.tolist())]

    def wedge_labels(self) -> list:
        return [[self.labels[x] for x in row] for row in self.wedge_nodes.tolist()]


def _contains(sorted_seq, x) -> bool:
    k = bisect_left(sorted_seq, x)
    return k < len(sorted_seq) and sorted_seq[k] == x


# ----------------------------------------------------------------------------
# edge-list input / output


def load_edge_list(text: str, name: str = "") -> Graph:
    """Parse an edge list: one ``u v`` pair per line, ``#`` comments, blank lines ignored.

    Node ids are compacted to ``0..n-1`` in order of first appearance; the
    original integers are kept as ``Graph.labels``.
    """
    ids = {}
    pairs = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise Malformed(f"expected two node ids, got {raw!r}", lineno)
        try:
            u, v = (int(f, 10) for f in fields)
        except ValueError:
            raise Malformed(f"non-integer node id in {raw!r}", lineno) from None
        if u < 0 or v < 0:
            raise Malformed(f"negative node id in {raw!r}", lineno)
        if u == v:
            raise SelfLoop(f"self-loop at node {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdge(f"duplicate edge {{{u}, {v}}}", lineno)
        seen.add(key)
        for x in (u, v):
            ids.setdefault(x, len(ids))
        pairs.append((ids[u], ids[v]))
    if not pairs:
        raise Malformed("edge list contains no edges")
    labels = tuple(ids)
    return Graph.from_edges(len(ids), pairs, labels=labels, name=name)


def read_edge_list(path, name: str = None) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh.read(), name=str(path) if name is None else name)


def dump_edge_list(g: Graph) -> str:
    """Edge-list text; integer labels are written as-is, anything else falls back to node ids."""
    if all(isinstance(x, (int, np.integer)) for x in g.labels):
        names = [int(x) for x in g.labels]
    else:
        names = list(range(g.n))
    return "".join(f"{names[u]} {names[v]}\n" for u, v in g.edges)


# ----------------------------------------------------------------------------
# enumeration and neighbourhoods


def directed_edges(g: Graph) -> list:
    """All directed edges in canonical (lexicographic) order; ``2|E|`` of them."""
    return [DirectedEdge(t, h) for t, h in zip(g.edge_tail.tolist(), g.edge_head.tolist())]


def enumerate_wedges(g: Graph) -> list:
    """All directed wedges ``(a, b, c)`` in lexicographic order, with their kind."""
    kinds = [WedgeKind(k) for k in g.wedge_kind.tolist()]
    return [Wedge(a, b, c, k) for (a, b, c), k in zip(g.wedge_nodes.tolist(), kinds)]


def wedge_weights(g: Graph, params: Params) -> np.ndarray:
    """Vector of lambda(w) over the canonical wedge order."""
    return params.weights[g.wedge_kind]


def lam(params: Params, w: Wedge) -> float:
    """Weight of a single wedge by its kind."""
    return float(params.weights[int(w.kind)])


def _edge_state(g, e) -> int:
    if isinstance(e, (tuple, list)):
        return g.edge_index(*e)
    e = int(e)
    if not 0 <= e < g.num_directed_edges:
        raise UnknownState(f"edge index {e} out of range")
    return e


def _wedge_state(g, w) -> int:
    if isinstance(w, (tuple, list)):
        return g.wedge_index(*w[:3])
    w = int(w)
    if not 0 <= w < g.num_wedges:
        raise UnknownState(f"wedge index {w} out of range")
    return w


def out_wedges(g: Graph, w) -> np.ndarray:
    """ON(w): wedges sharing the first two nodes of ``w``."""
    e = g.wedge_first[_wedge_state(g, w)]
    return np.arange(g.wedge_offset[e], g.wedge_offset[e + 1])


def in_wedges(g: Graph, w) -> np.ndarray:
    """IN(w): wedges whose second edge is the first edge of ``w``."""
    return in_wedges_of_edge(g, int(g.wedge_first[_wedge_state(g, w)]))


def in_wedges_of_edge(g: Graph, e) -> np.ndarray:
    """IN(e): wedges ending in the directed edge ``e``."""
    e = _edge_state(g, e)
    ptr, idx = g.wedges_into_edge
    return idx[ptr[e]:ptr[e + 1]]


def in_wedges_of_node(g: Graph, v: int) -> np.ndarray:
    """IN(v): wedges whose last node is ``v``."""
    if not 0 <= v < g.n:
        raise UnknownState(f"node {v} out of range")
    return np.concatenate([in_wedges_of_edge(g, int(e)) for e in in_edges_of_node(g, v)])


def in_edges_of_node(g: Graph, v: int) -> np.ndarray:
    """Directed edges with head ``v``, i.e. the reversals of the edges leaving ``v``."""
    if not 0 <= v < g.n:
        raise UnknownState(f"node {v} out of range")
    return np.sort(g.edge_reverse[g.edge_offset[v]:g.edge_offset[v + 1]])


def neighbors(g: Graph, query: str, state) -> np.ndarray:
    """Dispatch for the neighbourhood queries by name.

    ``query`` is one of ``"in_wedge"``, ``"out_wedge"``, ``"in_edge_wedges"``,
    ``"in_node_wedges"``, ``"in_node_edges"``; indices are returned.
    """
    table = {
        "in_wedge": in_wedges,
        "out_wedge": out_wedges,
        "in_edge_wedges": in_wedges_of_edge,
        "in_node_wedges": in_wedges_of_node,
        "in_node_edges": in_edges_of_node,
    }
    try:
        fn = table[query]
    except KeyError:
        raise ValueError(f"unknown neighbourhood query {query!r}") from None
    return fn(g, state)


def edge_weight_sums(g: Graph, params: Params) -> tuple:
    """Per directed edge e: (sum of lambda over wedges leaving e, sum over wedges entering e)."""
    lam_w = wedge_weights(g, params)
    out_sum = np.bincount(g.wedge_first, weights=lam_w, minlength=g.num_directed_edges)
    in_sum = np.bincount(g.wedge_second, weights=lam_w, minlength=g.num_directed_edges)
    return out_sum, in_sum


def kind_counts_per_edge(g: Graph, which: str = "out") -> np.ndarray:
    """``(|E|, 3)`` integer counts of flat/triangle/open wedges leaving (or entering) each edge."""
    key = g.wedge_first if which == "out" else g.wedge_second
    counts = np.zeros((g.num_directed_edges, 3), dtype=np.int64)
    np.add.at(counts, (key, g.wedge_kind.astype(np.int64)), 1)
    return counts


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = [source]
    while frontier:
        nxt = []
        for v in frontier:
            for u in g.adjacency[v]:
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    return dist


def induced_subgraph_edges(g: Graph, nodes: Sequence[int]) -> list:
    keep = set(nodes)
    return [(u, v) for u, v in g.edges if u in keep and v in keep]
