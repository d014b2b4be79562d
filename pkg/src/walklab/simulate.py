"""Trajectory simulation of the second-order walk on the node set.

Randomness comes from numpy's PCG64 bit generator.  One ``random()`` double
is drawn per step, in step order, and the next node is the first neighbour
(in increasing id order) whose cumulative normalised weight exceeds it.  The
trajectory is therefore a pure function of (graph, params, start, steps, seed).
"""

from __future__ import annotations

import hashlib
import json
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import DeadEnd, NeverReturned
from .graph import Graph, Params, wedge_weights
from .kernels import EDGE, WEDGE
from .stationary import NODE, Measure

_BATCH = 1 << 16


@dataclass(frozen=True, eq=False)
class Trajectory:
    nodes: np.ndarray
    seed: int
    params: Params
    start_edge: tuple

    def __len__(self):
        return len(self.nodes)

    def digest(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.nodes, dtype="<i8").tobytes()).hexdigest()


def _cumulative_tables(g: Graph, params: Params):
    lam = wedge_weights(g, params)
    tables = []
    off = g.wedge_offset
    for e in range(g.num_directed_edges):
        w = lam[off[e]:off[e + 1]]
        total = w.sum()
        if total <= 0:
            tables.append(None)
            continue
        cum = np.cumsum(w) / total
        cum[-1] = 1.0
        tables.append(cum.tolist())
    return tables


def walk(g: Graph, params: Params, start, steps: int, seed: int = 0) -> Trajectory:
    """Simulate ``steps`` moves after the initial directed edge ``start = (u0, u1)``.

    Returns ``steps + 2`` nodes.  A dead end raises :class:`DeadEnd` with the
    prefix generated so far attached as ``exc.trajectory``.
    """
    e = g.edge_index(int(start[0]), int(start[1]))
    tables = _cumulative_tables(g, params)
    heads = g.edge_head.tolist()
    edge_off = g.edge_offset.tolist()
    out = np.empty(steps + 2, dtype=np.int64)
    out[0], out[1] = int(start[0]), int(start[1])
    rng = np.random.Generator(np.random.PCG64(seed))
    t = 0
    while t < steps:
        batch = rng.random(min(_BATCH, steps - t)).tolist()
        for u in batch:
            cum = tables[e]
            if cum is None:
                prefix = Trajectory(out[: t + 2].copy(), seed, params, tuple(start))
                raise DeadEnd(f"no admissible move after edge {g.directed_edge(e)} at step {t}", state=g.directed_edge(e), trajectory=prefix)
            k = bisect_right(cum, u)
            e = edge_off[heads[e]] + k
            t += 1
            out[t + 1] = heads[e]
    tr = Trajectory(out, seed, params, (int(start[0]), int(start[1])))
    _check_legal(g, params, tr)
    return tr


def _edge_ids(g: Graph, nodes: np.ndarray) -> np.ndarray:
    """Directed-edge indices of consecutive node pairs; raises if a pair is not an edge."""
    keys = g.edge_tail * g.n + g.edge_head  # sorted, since edges are lexicographic
    q = nodes[:-1] * g.n + nodes[1:]
    idx = np.searchsorted(keys, q)
    if np.any(idx >= len(keys)) or np.any(keys[np.minimum(idx, len(keys) - 1)] != q):
        raise AssertionError("trajectory moves along a non-edge")
    return idx


def _wedge_ids(g: Graph, edges: np.ndarray) -> np.ndarray:
    first, second = edges[:-1], edges[1:]
    # block start of the first edge plus position of the last node among the middle node's neighbours
    return g.wedge_offset[first] + (second - g.edge_offset[g.edge_head[first]])


def _check_legal(g: Graph, params: Params, tr: Trajectory):
    if len(tr.nodes) < 3:
        return
    wedges = _wedge_ids(g, _edge_ids(g, tr.nodes))
    lam = wedge_weights(g, params)
    if np.any(lam[wedges] <= 0):
        bad = int(np.flatnonzero(lam[wedges] <= 0)[0])
        raise AssertionError(f"zero-probability move sampled at step {bad}")


def occupation(g: Graph, tr: Trajectory, burn_in: int = 0) -> dict:
    """Visit frequencies at node, directed-edge and wedge level after ``burn_in`` steps."""
    nodes = tr.nodes
    if burn_in >= len(nodes) - 2:
        raise ValueError("burn_in must be shorter than the trajectory")
    edges = _edge_ids(g, nodes)
    n_vis = np.bincount(nodes[burn_in + 2:], minlength=g.n).astype(float)
    e_vis = np.bincount(edges[burn_in + 1:], minlength=g.num_directed_edges).astype(float)
    wedges = _wedge_ids(g, edges[burn_in:])
    w_vis = np.bincount(wedges, minlength=g.num_wedges).astype(float)
    return {
        NODE: Measure(NODE, n_vis / n_vis.sum()),
        EDGE: Measure(EDGE, e_vis / e_vis.sum()),
        WEDGE: Measure(WEDGE, w_vis / w_vis.sum()),
    }


@dataclass
class ReturnStats:
    target: int
    gaps: np.ndarray
    count: int
    mean: float
    max: int


def return_times(tr: Trajectory, target: int) -> ReturnStats:
    """Gaps between successive visits to ``target``."""
    hits = np.flatnonzero(tr.nodes == target)
    if len(hits) < 2:
        raise NeverReturned(f"node {target} visited {len(hits)} time(s)")
    gaps = np.diff(hits)
    return ReturnStats(int(target), gaps, int(len(gaps)), float(gaps.mean()), int(gaps.max()))


def dump_trajectory(tr: Trajectory, fh) -> None:
    """JSON header line, then one node id per line."""
    header = {
        "seed": tr.seed,
        "params": {"alpha": tr.params.alpha, "beta": tr.params.beta, "gamma": tr.params.gamma},
        "start": list(tr.start_edge),
        "length": len(tr.nodes),
        "rng": "PCG64",
        "sha256": tr.digest(),
    }
    fh.write(json.dumps(header) + "\n")
    fh.write("\n".join(map(str, tr.nodes.tolist())))
    fh.write("\n")


def load_trajectory(fh) -> Trajectory:
    header = json.loads(fh.readline())
    nodes = np.array([int(x) for x in fh.read().split()], dtype=np.int64)
    p = header["params"]
    return Trajectory(nodes, header["seed"], Params(p["alpha"], p["beta"], p["gamma"]), tuple(header["start"]))
