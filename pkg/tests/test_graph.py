import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walklab import errors
from walklab.generators import (
    circulant,
    clique4_minus_edge,
    complete,
    cycle,
    erdos_renyi,
    fig3_triangle_arm,
    generate,
    regular_tree,
    triangular_patch,
    triangular_torus,
)
from walklab.graph import (
    Graph,
    Params,
    Wedge,
    WedgeKind,
    directed_edges,
    dump_edge_list,
    enumerate_wedges,
    lam,
    load_edge_list,
    neighbors,
    wedge_weights,
)


def test_load_triangle():
    g = load_edge_list("0 1\n1 2\n2 0")
    assert g.n == 3 and g.num_edges == 3


@pytest.mark.parametrize(
    "text,exc,line",
    [
        ("0 0", errors.SelfLoop, 1),
        ("0 1\n1 0", errors.DuplicateEdge, 2),
        ("0 1\n1 x", errors.Malformed, 2),
        ("0 1\n# c\n\n1 2 3", errors.Malformed, 4),
        ("0 -1", errors.Malformed, 1),
    ],
)
def test_load_errors(text, exc, line):
    with pytest.raises(exc) as info:
        load_edge_list(text)
    assert info.value.line == line


def test_load_remaps_by_first_appearance():
    g = load_edge_list("# header\n10 7\n\n7 3  # trailing\n")
    assert g.labels == (10, 7, 3)
    assert g.edges == [(0, 1), (1, 2)]


def test_dump_roundtrip():
    g = erdos_renyi(9, 0.4, seed=5)
    h = load_edge_list(dump_edge_list(g))
    # ids are compacted by first appearance, so compare through the label map
    assert {tuple(sorted((h.labels[u], h.labels[v]))) for u, v in h.edges} == set(g.edges)


def test_named_generator_degrees():
    assert clique4_minus_edge().degrees.tolist() == [2, 3, 2, 3]
    assert fig3_triangle_arm().degrees.tolist() == [2, 2, 3, 1]
    t = triangular_torus(4, 4)
    assert t.n == 16 and set(t.degrees.tolist()) == {6}
    assert clique4_minus_edge().labels == ("v1", "v2", "v3", "v4")
    assert not clique4_minus_edge().has_edge(0, 2)


@pytest.mark.parametrize("call", [lambda: cycle(2), lambda: triangular_torus(2, 5), lambda: complete(1), lambda: generate("nope")])
def test_invalid_size(call):
    with pytest.raises(errors.InvalidSize):
        call()


def test_generate_aliases():
    assert generate("tri-torus", 3, 3).num_edges == 27
    assert generate("k4-minus-edge").num_edges == 5
    assert generate("circulant", 8, [1, 2]).degrees.tolist() == [4] * 8


def test_erdos_renyi_reproducible_and_connected():
    a, b = erdos_renyi(12, 0.3, seed=7), erdos_renyi(12, 0.3, seed=7)
    assert a.edges == b.edges and a.is_connected()


def test_triangular_patch_and_tree():
    g, c, boundary = triangular_patch(2)
    # hexagonal ball: 1 + 6 + 12 nodes
    assert g.n == 19 and g.degrees[c] == 6 and len(boundary) == 12
    t, root, leaves = regular_tree(3, 3)
    assert t.n == 1 + 3 + 6 + 12 and len(leaves) == 12 and t.degrees[root] == 3


def test_directed_edge_counts():
    assert len(directed_edges(load_edge_list("0 1\n1 2\n2 0"))) == 6
    assert len(directed_edges(clique4_minus_edge())) == 10
    assert len(directed_edges(complete(4))) == 12
    es = directed_edges(complete(4))
    assert es == sorted(es)


def test_wedge_counts():
    assert len(enumerate_wedges(complete(4))) == 36
    assert clique4_minus_edge().kind_counts() == {"flat": 10, "triangle": 12, "open": 4}
    assert len(enumerate_wedges(fig3_triangle_arm())) == 18


def test_lambda():
    p = Params(1, 2, 3)
    assert lam(p, Wedge(0, 1, 0, WedgeKind.FLAT)) == 1
    g = clique4_minus_edge()
    w = g.wedge(g.wedge_index(0, 1, 2))
    assert w.kind == WedgeKind.OPEN and lam(p, w) == 3


def test_params_validation():
    Params(0, 1, 1)
    for bad in [(-1, 1, 1), (1, 0, 1), (1, 1, 0), (float("nan"), 1, 1)]:
        with pytest.raises(ValueError):
            Params(*bad)


def test_neighbourhood_sizes(graph):
    g = graph
    for v in range(g.n):
        assert len(neighbors(g, "in_node_wedges", v)) == sum(g.degrees[u] for u in g.adjacency[v])
        assert len(neighbors(g, "in_node_edges", v)) == g.degrees[v]
    for w in range(g.num_wedges):
        assert len(neighbors(g, "out_wedge", w)) == g.degrees[g.wedge_nodes[w, 1]]
    if len(set(g.degrees.tolist())) == 1:
        d = int(g.degrees[0])
        assert all(len(neighbors(g, "in_node_wedges", v)) == d * d for v in range(g.n))


def test_neighbourhood_definitions(graph):
    g = graph
    wn = g.wedge_nodes
    for w in range(0, g.num_wedges, 3):
        a, b, c = wn[w]
        ins = set(neighbors(g, "in_wedge", w).tolist())
        assert ins == {x for x in range(g.num_wedges) if wn[x, 1] == a and wn[x, 2] == b}
        ons = set(neighbors(g, "out_wedge", (a, b, c)).tolist())
        assert ons == {x for x in range(g.num_wedges) if wn[x, 0] == a and wn[x, 1] == b}


def test_unknown_state():
    g = complete(4)
    with pytest.raises(errors.UnknownState):
        neighbors(g, "in_wedge", 10_000)
    with pytest.raises(errors.UnknownState):
        neighbors(g, "in_edge_wedges", (0, 0))


def test_structure_invariants(graph):
    g = graph
    assert g.num_wedges == int((g.degrees**2).sum())
    assert np.array_equal(g.edge_reverse[g.edge_reverse], np.arange(g.num_directed_edges))
    assert np.array_equal(g.wedge_reverse[g.wedge_reverse], np.arange(g.num_wedges))
    assert np.array_equal(g.wedge_kind[g.wedge_reverse], g.wedge_kind)
    lam_ = wedge_weights(g, Params(1, 2, 3))
    assert np.array_equal(lam_, lam_[g.wedge_reverse])
    for w in range(g.num_wedges):
        a, b, c = g.wedge_nodes[w]
        kind = WedgeKind.FLAT if a == c else (WedgeKind.TRIANGLE if g.has_edge(a, c) else WedgeKind.OPEN)
        assert g.wedge_kind[w] == kind


@st.composite
def simple_graphs(draw, max_n=9):
    n = draw(st.integers(3, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=1, unique=True))
    # spanning path keeps every node at degree >= 1
    edges = set(chosen) | {(i, i + 1) for i in range(n - 1)}
    return Graph.from_edges(n, sorted(edges))


@settings(max_examples=60, deadline=None)
@given(simple_graphs())
def test_random_graph_invariants(g):
    assert g.num_wedges == int((g.degrees**2).sum())
    assert g.num_directed_edges == 2 * g.num_edges
    ws = enumerate_wedges(g)
    assert [tuple(w[:3]) for w in ws] == sorted(tuple(w[:3]) for w in ws)
    for i, w in enumerate(ws):
        assert g.wedge_index(w.a, w.b, w.c) == i
        assert w.reverse() == ws[g.wedge_reverse[i]]


def test_rejects_isolated_and_asymmetric():
    with pytest.raises(errors.InvalidGraph):
        Graph.from_edges(3, [(0, 1)])
    with pytest.raises(errors.InvalidGraph):
        Graph(adjacency=((1,), ()), labels=(0, 1), name="bad")


def test_circulant_degree():
    assert set(circulant(10, [1, 3]).degrees.tolist()) == {4}
