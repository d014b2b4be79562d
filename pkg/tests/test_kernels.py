from fractions import Fraction

import numpy as np
import pytest

from walklab import errors
from walklab.generators import clique4_minus_edge, complete, cycle, fig3_triangle_arm, path
from walklab.graph import Graph, Params, in_wedges
from walklab.kernels import (
    build_edge_kernel,
    build_wedge_kernel,
    denominator_audit,
    is_bistochastic,
    kernel_to_json,
    lazy,
    n_step,
    wedge_choice_prob,
    wedge_probs,
)


def brute_edge_kernel(g, p):
    """Edge kernel straight from the walk definition, one neighbour loop per state."""
    m = g.num_directed_edges
    out = np.zeros((m, m))
    for i in range(m):
        s, u = g.directed_edge(i)
        weights = {}
        for v in g.adjacency[u]:
            if v == s:
                weights[v] = p.alpha
            elif g.has_edge(s, v):
                weights[v] = p.beta
            else:
                weights[v] = p.gamma
        total = sum(weights.values())
        for v, w in weights.items():
            if w > 0:
                out[i, g.edge_index(u, v)] = w / total
    return out


def test_edge_kernel_matches_definition(graph, params):
    if params.alpha == 0 and graph.degrees.min() < 2:
        pytest.skip("dead end")
    k = build_edge_kernel(graph, params)
    assert np.allclose(k.toarray(), brute_edge_kernel(graph, params), atol=1e-15)


def test_rows_stochastic_and_support(graph, params):
    if params.alpha == 0 and graph.degrees.min() < 2:
        pytest.skip("dead end")
    for k in (build_edge_kernel(graph, params), build_wedge_kernel(graph, params)):
        assert np.max(np.abs(k.row_sums() - 1)) < 1e-12
        assert k.matrix.data.min() > 0 and k.matrix.data.max() <= 1
    k = build_edge_kernel(graph, params)
    lam = params.weights[graph.wedge_kind]
    support = k.entries(graph.wedge_first, graph.wedge_second) > 0
    assert np.array_equal(support, lam > 0)
    assert k.matrix.nnz == int((lam > 0).sum())


def test_wedge_kernel_is_edge_kernel_on_second_edges(graph, params):
    if params.alpha == 0 and graph.degrees.min() < 2:
        pytest.skip("dead end")
    ke, kw = build_edge_kernel(graph, params), build_wedge_kernel(graph, params)
    g = graph
    for w2 in range(g.num_wedges):
        src = in_wedges(g, w2)
        vals = kw.entries(src, np.full(len(src), w2))
        # rate into w2 does not depend on the source wedge
        assert np.ptp(vals) == 0
        assert vals[0] == pytest.approx(ke.entries([g.wedge_second[src[0]]], [g.wedge_second[w2]])[0], abs=1e-15)


def test_wedge_choice_prob_examples():
    n = 5
    g = complete(n)
    p = wedge_probs(g, Params(2, 2, 7))
    assert np.allclose(p, 1 / (n - 1))
    assert np.allclose(wedge_probs(cycle(6), Params(1, 3, 1)), 0.5)
    a, b, c, d = 1.0, 2.0, 3.0, None
    f3 = fig3_triangle_arm()
    # arm edge (d, c) continued to (c, a); ids a,b,c,d = 0,1,2,3
    assert wedge_choice_prob(f3, Params(a, b, c), (3, 2, 0)) == pytest.approx(c / (a + 2 * c))


def test_fig3_column_sum():
    g = fig3_triangle_arm()
    for a, b, c in [(1, 1, 1), (1, 2, 3), (0.5, 4, 0.25), (3, 1, 2)]:
        k = build_edge_kernel(g, Params(a, b, c))
        col = k.col_sums()[g.edge_index(2, 0)]
        assert col == pytest.approx(a / (a + b + c) + c / (a + 2 * c) + b / (a + b + c), abs=1e-12)
    exact = Fraction(1, 6) + Fraction(3, 7) + Fraction(2, 6)
    k = build_edge_kernel(g, Params(1, 2, 3))
    assert abs(k.col_sums()[g.edge_index(2, 0)] - float(exact)) < 1e-15


def test_bistochastic_iff_beta_eq_gamma(graph):
    for b, c in [(1, 1), (2, 2), (1, 3)]:
        k = build_edge_kernel(graph, Params(1.5, b, c))
        verdict = is_bistochastic(k)
        if b == c:
            assert verdict.bistochastic
    assert not is_bistochastic(build_edge_kernel(fig3_triangle_arm(), Params(1, 1, 2))).bistochastic


def test_wedge_bistochastic_characterisation(graph, params):
    g = graph
    if params.alpha == 0 and g.degrees.min() < 2:
        pytest.skip("dead end")
    kw = build_wedge_kernel(g, params)
    p = wedge_probs(g, params)
    n_in = np.array([len(in_wedges(g, w)) for w in range(g.num_wedges)])
    assert np.allclose(kw.col_sums(), n_in * p, atol=1e-12)
    assert is_bistochastic(kw).bistochastic == bool(np.allclose(p, 1 / n_in, atol=1e-10))


def test_triangle_wedge_rows():
    g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    kw = build_wedge_kernel(g, Params(1, 1, 1))
    for i in range(kw.dim):
        assert sorted(v for _, v in kw.row(i)) == [0.5, 0.5]


def test_dead_end():
    with pytest.raises(errors.DeadEnd) as info:
        build_edge_kernel(path(4), Params(0, 1, 1))
    assert info.value.state is not None
    with pytest.raises(errors.DeadEnd):
        build_wedge_kernel(fig3_triangle_arm(), Params(0, 1, 2))


def test_lazy():
    k = build_edge_kernel(clique4_minus_edge(), Params(1, 2, 3))
    kl = lazy(k)
    assert np.all(np.diag(kl.toarray()) >= 0.5)
    assert np.allclose(kl.row_sums(), 1)
    from walklab.kernels import Kernel
    from scipy import sparse

    eye = Kernel("edge", sparse.identity(4, format="csr"))
    assert np.array_equal(lazy(eye).toarray(), np.eye(4))


def test_n_step():
    g = complete(4)
    kw = build_wedge_kernel(g, Params(1, 2, 3))
    assert np.array_equal(n_step(kw, 1).toarray(), kw.toarray())
    k3, k4 = n_step(kw, 3).toarray(), n_step(kw, 4).toarray()
    assert np.allclose(k3.sum(axis=1), 1, atol=1e-10)
    tri = g.wedge_index(0, 1, 2)
    assert k3[tri, tri] > 0 and k4[tri, tri] > 0
    with pytest.raises(errors.Overflow):
        n_step(kw, 2, budget=10)


def test_two_step_edge_kernel_is_sub_markov_on_wedges():
    """Squaring the edge kernel and reading it on wedge pairs loses mass; the wedge kernel does not."""
    g = fig3_triangle_arm()
    p = Params(1, 2, 3)
    ke2 = n_step(build_edge_kernel(g, p), 2).toarray()
    restricted = ke2[np.ix_(g.wedge_first, g.wedge_first)]
    mask = np.zeros_like(restricted, dtype=bool)
    for w in range(g.num_wedges):
        mask[w] = g.wedge_first == g.wedge_second[w]
    sub = np.where(mask, restricted, 0).sum(axis=1)
    assert np.all(sub <= 1 + 1e-12) and np.any(sub < 1 - 1e-3)
    assert np.allclose(build_wedge_kernel(g, p).row_sums(), 1)


def test_denominators_and_json():
    import json

    g = clique4_minus_edge()
    audit = denominator_audit(g)
    assert len(audit) == 10 and all(sum(c) == g.degrees[g.edge_head[i]] for i, c in enumerate(audit))
    doc = json.loads(kernel_to_json(g, build_edge_kernel(g, Params(1, 2, 3)), Params(1, 2, 3)))
    assert doc["dim"] == 10 and len(doc["rows"]) == 10 and doc["states"][0] == ["v1", "v2"]
