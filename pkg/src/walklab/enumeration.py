"""Exhaustive enumeration of small simple graphs up to isomorphism.

Graphs on n nodes are grown from the isomorphism classes on n - 1 nodes by
adding one vertex joined to every subset of the old vertices.  Candidates are
bucketed by degree sequence plus rounded adjacency spectrum; inside a bucket a
degree-respecting permutation search decides isomorphism.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations, product

import numpy as np

from .graph import Graph

_DECIMALS = 8


def _invariant(adj: np.ndarray) -> tuple:
    deg = adj.sum(axis=1)
    eig = np.round(np.linalg.eigvalsh(adj.astype(float)), _DECIMALS) + 0.0
    return tuple(sorted(deg.tolist())), tuple(eig.tolist())


def _isomorphic(a: np.ndarray, b: np.ndarray) -> bool:
    """Brute force over permutations that map each degree class onto itself."""
    da, db = a.sum(axis=1), b.sum(axis=1)
    if sorted(da.tolist()) != sorted(db.tolist()):
        return False
    classes = sorted(set(da.tolist()))
    src = [np.flatnonzero(da == d) for d in classes]
    dst = [np.flatnonzero(db == d) for d in classes]
    n = len(a)
    for choice in product(*(permutations(d.tolist()) for d in dst)):
        perm = np.empty(n, dtype=np.int64)
        for s, t in zip(src, choice):
            perm[s] = t
        if np.array_equal(a, b[np.ix_(perm, perm)]):
            return True
    return False


@lru_cache(maxsize=None)
def _all_graphs(n: int) -> tuple:
    """Adjacency matrices (as bytes) of one representative per isomorphism class on n nodes."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return (np.zeros((1, 1), dtype=np.int8).tobytes(),)
    buckets: dict = {}
    reps = []
    for raw in _all_graphs(n - 1):
        old = np.frombuffer(raw, dtype=np.int8).reshape(n - 1, n - 1)
        for k in range(n):
            for nbrs in combinations(range(n - 1), k):
                adj = np.zeros((n, n), dtype=np.int8)
                adj[: n - 1, : n - 1] = old
                adj[n - 1, list(nbrs)] = 1
                adj[list(nbrs), n - 1] = 1
                key = _invariant(adj)
                bucket = buckets.setdefault(key, [])
                if any(_isomorphic(adj, other) for other in bucket):
                    continue
                bucket.append(adj)
                reps.append(adj.tobytes())
    return tuple(reps)


def _connected(adj: np.ndarray) -> bool:
    n = len(adj)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in np.flatnonzero(adj[v]).tolist():
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def all_graphs(n: int) -> list:
    """One adjacency matrix per isomorphism class of simple graphs on ``n`` nodes."""
    return [np.frombuffer(r, dtype=np.int8).reshape(n, n).copy() for r in _all_graphs(n)]


def connected_graphs(n: int) -> list:
    """Connected simple graphs on ``n >= 2`` nodes, one per isomorphism class, as :class:`Graph`."""
    if n < 2:
        raise ValueError("connected graphs need at least two nodes")
    out = []
    for i, adj in enumerate(all_graphs(n)):
        if not _connected(adj):
            continue
        rows, cols = np.nonzero(np.triu(adj))
        out.append(Graph.from_edges(n, list(zip(rows.tolist(), cols.tolist())), name=f"conn{n}_{i}"))
    return out
