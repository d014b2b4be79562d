import io

import numpy as np
import pytest
from scipy import stats

from walklab import errors
from walklab.generators import clique4_minus_edge, complete, cycle, fig3_triangle_arm, path, petersen
from walklab.graph import Params
from walklab.kernels import build_edge_kernel, build_wedge_kernel, wedge_probs
from walklab.simulate import (
    Trajectory,
    _check_legal,
    dump_trajectory,
    load_trajectory,
    occupation,
    return_times,
    walk,
)
from walklab.stationary import NODE, pullback, stationary, total_variation

# first PCG64 doubles for seed 42, as documented in the README
PCG64_SEED42 = [0.7739560485559633, 0.4388784397520523, 0.8585979199113825, 0.6973680290593639, 0.09417734788764953]
GOLDEN_C4E = [0, 1, 3, 1, 3, 2, 1, 3, 2, 3, 0, 1, 2, 3, 1, 3, 1, 0, 3, 0, 3, 2]


@pytest.fixture(scope="module")
def long_run():
    g = clique4_minus_edge()
    p = Params(1, 2, 3)
    return g, p, walk(g, p, (0, 1), 10**6, seed=42)


def test_reference_sequence():
    rng = np.random.Generator(np.random.PCG64(42))
    assert rng.random(5).tolist() == PCG64_SEED42
    tr = walk(clique4_minus_edge(), Params(1, 2, 3), (0, 1), 20, seed=42)
    assert tr.nodes.tolist() == GOLDEN_C4E


def test_reproducible():
    g = petersen()
    a = walk(g, Params(1, 2, 3), (0, 1), 5000, seed=7)
    b = walk(g, Params(1, 2, 3), (0, 1), 5000, seed=7)
    c = walk(g, Params(1, 2, 3), (0, 1), 5000, seed=8)
    assert a.digest() == b.digest() != c.digest()
    assert len(a) == 5002 and a.nodes[:2].tolist() == [0, 1]


def test_no_backtracks_at_alpha_zero():
    tr = walk(petersen(), Params(0, 1, 1), (0, 1), 20000, seed=1).nodes
    assert not np.any(tr[2:] == tr[:-2])


def test_consecutive_nodes_adjacent():
    g = complete(5)
    tr = walk(g, Params(1, 2, 3), (3, 4), 2000, seed=3).nodes
    assert all(g.has_edge(int(u), int(v)) for u, v in zip(tr[:-1], tr[1:]))


def test_srw_one_step_uniform():
    g = complete(5)
    tr = walk(g, Params(1, 1, 1), (0, 1), 4 * 10**5 * 5, seed=11).nodes
    hits = np.flatnonzero((tr[:-2] == 0) & (tr[1:-1] == 1))
    nxt = tr[hits + 2]
    assert len(nxt) >= 10**5
    counts = np.bincount(nxt, minlength=5)[[0, 2, 3, 4]]
    assert stats.chisquare(counts).pvalue > 1e-3


def test_monte_carlo_node_law(long_run):
    g, p, tr = long_run
    pi = pullback(g, stationary(build_wedge_kernel(g, p)), NODE).values
    occ = occupation(g, tr)
    assert occ[NODE].values.sum() == pytest.approx(1.0, abs=1e-15)
    assert total_variation(occ[NODE].values, pi) < 0.01
    for v in range(g.n):
        rs = return_times(tr, v)
        assert abs(rs.mean * pi[v] - 1) < 0.1


def test_return_counts_grow_linearly(long_run):
    g, p, tr = long_run
    pi = pullback(g, stationary(build_wedge_kernel(g, p)), NODE).values
    half = len(tr.nodes) // 2
    for v in range(g.n):
        first = np.count_nonzero(tr.nodes[:half] == v)
        total = np.count_nonzero(tr.nodes == v)
        assert abs(first / half / pi[v] - 1) < 0.1
        assert abs(total / len(tr.nodes) / pi[v] - 1) < 0.1


def test_wedge_occupation_invariance(long_run):
    g, p, tr = long_run
    occ = occupation(g, tr)["wedge"].values
    n = len(tr.nodes) - 2
    pw = wedge_probs(g, p)
    inflow = np.bincount(g.wedge_second, weights=occ, minlength=g.num_directed_edges)[g.wedge_first]
    resid = np.abs(occ - pw * inflow)
    # each entry into IN(w) is a Bernoulli(p(w)) trial for moving to w next
    sigma = np.sqrt(inflow * n * pw * (1 - pw) + 1) / n
    assert np.all(resid < 3 * sigma)
    exact = stationary(build_wedge_kernel(g, p)).values
    assert total_variation(occ, exact) < 0.02


def test_edge_occupation_uniform_when_beta_eq_gamma():
    g = clique4_minus_edge()
    tr = walk(g, Params(2, 1, 1), (0, 1), 10**6, seed=5)
    occ = occupation(g, tr, burn_in=100)["edge"].values
    assert total_variation(occ, np.full(g.num_directed_edges, 1 / g.num_directed_edges)) < 0.01


@pytest.mark.parametrize(
    "g", [clique4_minus_edge(), fig3_triangle_arm(), cycle(5), path(4)], ids=lambda g: g.name
)
def test_wedge_occupation_small_corpus(g):
    p = Params(1, 2, 3)
    assert g.num_wedges <= 30
    tr = walk(g, p, (0, int(g.adjacency[0][0])), 10**6, seed=2)
    exact = stationary(build_wedge_kernel(g, p)).values
    assert total_variation(occupation(g, tr)["wedge"].values, exact) < 0.02


def test_occupation_levels_consistent():
    g = petersen()
    tr = walk(g, Params(1, 2, 3), (0, 1), 10**4, seed=9)
    occ = occupation(g, tr, burn_in=10)
    assert np.allclose(pullback(g, occ["wedge"], "edge").values, occ["edge"].values)
    assert np.allclose(pullback(g, occ["edge"], NODE).values, occ[NODE].values)
    with pytest.raises(ValueError):
        occupation(g, tr, burn_in=len(tr.nodes))


def test_never_returned():
    tr = walk(cycle(6), Params(0, 1, 1), (0, 1), 3, seed=0)
    assert tr.nodes.tolist() == [0, 1, 2, 3, 4]
    with pytest.raises(errors.NeverReturned):
        return_times(tr, 0)


def test_dead_end_prefix():
    with pytest.raises(errors.DeadEnd) as info:
        walk(path(4), Params(0, 1, 1), (0, 1), 10, seed=0)
    assert info.value.trajectory.nodes.tolist() == [0, 1, 2, 3]


def test_illegal_move_detected():
    g = petersen()
    bad = Trajectory(np.array([0, 1, 0, 1]), 0, Params(0, 1, 1), (0, 1))
    with pytest.raises(AssertionError):
        _check_legal(g, bad.params, bad)


def test_dump_load_roundtrip():
    g = petersen()
    tr = walk(g, Params(1, 2, 3), (0, 1), 500, seed=4)
    buf = io.StringIO()
    dump_trajectory(tr, buf)
    buf.seek(0)
    header = buf.readline()
    assert '"seed": 4' in header and '"rng": "PCG64"' in header
    buf.seek(0)
    back = load_trajectory(buf)
    assert back.digest() == tr.digest() and back.params == tr.params and back.start_edge == (0, 1)


def test_million_step_digest():
    # digest printed by `walklab simulate --steps 1000000 --seed 42`
    tr = walk(clique4_minus_edge(), Params(1, 1, 1), (0, 1), 1_000_000, seed=42)
    assert tr.digest() == "30e9e20ab248fdec43bd2f911a0b4ff4eed0e65e066e5869a306df822d2de396"
