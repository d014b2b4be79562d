"""Named graph families used throughout the tests, demos and CLI."""

from __future__ import annotations

import numpy as np

from .errors import InvalidSize
from .graph import Graph, bfs_distances


def complete(n: int) -> Graph:
    if n < 2:
        raise InvalidSize("complete graph needs n >= 2")
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)], name=f"complete({n})")


def cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidSize("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], name=f"cycle({n})")


def path(n: int) -> Graph:
    if n < 2:
        raise InvalidSize("path needs n >= 2")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], name=f"path({n})")


def circulant(n: int, offsets) -> Graph:
    """Node ``i`` is joined to ``i +/- s (mod n)`` for every offset ``s``."""
    offsets = sorted({int(s) % n for s in offsets} - {0})
    if n < 3 or not offsets:
        raise InvalidSize("circulant needs n >= 3 and at least one nonzero offset")
    edges = set()
    for i in range(n):
        for s in offsets:
            j = (i + s) % n
            edges.add((min(i, j), max(i, j)))
    return Graph.from_edges(n, sorted(edges), name=f"circulant({n}, {offsets})")


def triangular_torus(rows: int, cols: int) -> Graph:
    """Triangular lattice on a ``rows x cols`` torus; 6-regular for rows, cols >= 3."""
    if rows < 3 or cols < 3:
        raise InvalidSize("triangular torus needs rows, cols >= 3")

    def node(r, c):
        return (r % rows) * cols + (c % cols)

    edges = set()
    for r in range(rows):
        for c in range(cols):
            for dr, dc in ((0, 1), (1, 0), (1, 1)):
                u, v = node(r, c), node(r + dr, c + dc)
                edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(rows * cols, sorted(edges), name=f"triangular_torus({rows}, {cols})")


def fig3_triangle_arm() -> Graph:
    """Triangle a-b-c with a pendant edge c-d; nodes (a, b, c, d) = (0, 1, 2, 3)."""
    return Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)], labels=("a", "b", "c", "d"), name="fig3")


def clique4_minus_edge() -> Graph:
    """K4 on v1..v4 (ids 0..3) without the edge {v1, v3}."""
    edges = [(0, 1), (0, 3), (1, 2), (1, 3), (2, 3)]
    return Graph.from_edges(4, edges, labels=("v1", "v2", "v3", "v4"), name="clique4_minus_edge")


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner, name="petersen")


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise InvalidSize("both sides need at least one node")
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)], name=f"K({a},{b})")


def erdos_renyi(n: int, p: float, seed=None, max_tries: int = 1000) -> Graph:
    """G(n, p) conditioned on connectivity by resampling from the same generator."""
    if n < 2 or not 0 < p <= 1:
        raise InvalidSize("erdos_renyi needs n >= 2 and 0 < p <= 1")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    for _ in range(max_tries):
        mask = rng.random(len(iu)) < p
        edges = list(zip(iu[mask].tolist(), ju[mask].tolist()))
        deg = np.bincount(np.concatenate([iu[mask], ju[mask]]), minlength=n)
        if deg.min() == 0:
            continue
        g = Graph.from_edges(n, edges, name=f"erdos_renyi({n}, {p}, seed={seed})")
        if g.is_connected():
            return g
    raise InvalidSize(f"no connected G({n}, {p}) sample in {max_tries} tries")


def triangular_patch(radius: int) -> tuple:
    """Ball of the given radius in the infinite triangular lattice.

    Returns ``(graph, center, boundary)`` where ``boundary`` lists the nodes at
    graph distance exactly ``radius`` from ``center``.
    """
    if radius < 1:
        raise InvalidSize("radius must be >= 1")
    coords = []
    for q in range(-radius, radius + 1):
        for r in range(max(-radius, -q - radius), min(radius, -q + radius) + 1):
            coords.append((q, r))
    index = {c: i for i, c in enumerate(coords)}
    edges = []
    for (q, r), i in index.items():
        for dq, dr in ((1, 0), (0, 1), (-1, 1)):
            j = index.get((q + dq, r + dr))
            if j is not None:
                edges.append((i, j))
    g = Graph.from_edges(len(coords), edges, name=f"triangular_patch({radius})")
    center = index[(0, 0)]
    return g, center, _sphere(g, center, radius)


def regular_tree(degree: int, radius: int) -> tuple:
    """Ball of the given radius around the root of the ``degree``-regular tree.

    Returns ``(graph, root, leaves)``.
    """
    if degree < 2 or radius < 1:
        raise InvalidSize("tree needs degree >= 2 and radius >= 1")
    edges = []
    level = [0]
    count = 1
    for depth in range(radius):
        nxt = []
        for v in level:
            for _ in range(degree if depth == 0 else degree - 1):
                edges.append((v, count))
                nxt.append(count)
                count += 1
        level = nxt
    g = Graph.from_edges(count, edges, name=f"tree({degree}, {radius})")
    return g, 0, _sphere(g, 0, radius)


def _sphere(g, center, radius):
    return np.flatnonzero(bfs_distances(g, center) == radius)


GENERATORS = {
    "complete": complete,
    "cycle": cycle,
    "path": path,
    "circulant": circulant,
    "triangular_torus": triangular_torus,
    "fig3": fig3_triangle_arm,
    "clique4_minus_edge": clique4_minus_edge,
    "petersen": petersen,
    "complete_bipartite": complete_bipartite,
    "erdos_renyi": erdos_renyi,
}


def generate(kind: str, *args, **kwargs) -> Graph:
    """Look up a generator by name (hyphens and underscores are interchangeable)."""
    key = kind.replace("-", "_")
    aliases = {"tri_torus": "triangular_torus", "fig3_triangle_arm": "fig3", "k4_minus_edge": "clique4_minus_edge"}
    key = aliases.get(key, key)
    try:
        fn = GENERATORS[key]
    except KeyError:
        raise InvalidSize(f"unknown generator {kind!r}") from None
    return fn(*args, **kwargs)
