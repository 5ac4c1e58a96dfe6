from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from looprate import families
from looprate.errors import (
    BridgePresent,
    DisconnectedGraph,
    EmptyMergeSet,
    IncompleteRotation,
    NonPositiveWeight,
    SelfLoop,
    UnknownEndpoint,
)
from looprate.graph import (
    WeightedGraph,
    build_graph,
    dual,
    faces,
    graph_from_json,
    graph_to_json,
    merge_vertices,
)


def test_build_k3_mean_degree():
    g = build_graph([1, 2, 3], [(1, 2, 1), (2, 3, 1), (1, 3, 1)])
    assert g.n == 3 and g.m == 3
    assert g.mean_degree() == 2


def test_build_errors():
    with pytest.raises(DisconnectedGraph):
        build_graph([1, 2], [])
    with pytest.raises(SelfLoop):
        build_graph([1], [(1, 1, 1)])
    with pytest.raises(NonPositiveWeight):
        build_graph([1, 2], [(1, 2, 0)])
    with pytest.raises(UnknownEndpoint):
        build_graph([1, 2], [(1, 3, 1)])


def test_weights_parse_as_rationals():
    g = build_graph(["a", "b"], [("a", "b", "3/4")])
    assert g.edges[0].w == F(3, 4)
    g = build_graph(["a", "b"], [("a", "b", "0.25")])
    assert g.edges[0].w == F(1, 4)


def test_faces_k3_and_c4(k3, c4):
    assert len(faces(*k3)) == 2
    fs = faces(*c4)
    assert sorted(len(f) for f in fs) == [4, 4]
    g, rot = families.grid(2, 2)
    assert len(faces(g, rot)) == 2


def test_incomplete_rotation(k3):
    g, rot = k3
    bad = dict(rot)
    bad[1] = [0]
    with pytest.raises(IncompleteRotation):
        faces(g, bad)


def test_dual_k3_is_triple_edge(k3):
    d = dual(*k3)
    assert d.graph.n == 2 and d.graph.m == 3
    assert all(e.w == 1 for e in d.graph.edges)


def test_dual_c4():
    d = dual(*families.cycle(4))
    assert d.graph.n == 2 and d.graph.m == 4


def test_dual_rejects_bridge():
    g = build_graph([0, 1], [(0, 1, 1)])
    with pytest.raises(BridgePresent):
        dual(g, {0: [0], 1: [0]})


def test_dual_weights_reciprocal():
    g, rot = families.triangle(2, F(1, 3), 5)
    d = dual(g, rot)
    for e in g.edges:
        assert e.w * d.graph.edge(d.edge_map[e.id]).w == 1
    assert sum(1 / e.w for e in d.graph.edges) == sum(e.w for e in g.edges)


@pytest.mark.parametrize("make", [
    lambda: families.wheel(4), lambda: families.wheel(6), lambda: families.grid(2, 3),
    lambda: families.grid(3, 3), lambda: families.complete4(), lambda: families.cycle(5),
])
def test_dual_of_dual_matches_primal(make):
    g, rot = make()
    d = dual(g, rot)
    dd = dual(d.graph, d.rotation)
    assert dd.graph.n == g.n and dd.graph.m == g.m
    assert sorted(e.w for e in dd.graph.edges) == sorted(e.w for e in g.edges)
    degs = sorted(dd.graph.degree(v) for v in dd.graph.vertices)
    assert degs == sorted(g.degree(v) for v in g.vertices)
    assert len(faces(d.graph, d.rotation)) == g.n


def test_merge_grid_boundary():
    g, _ = families.grid(3, 3)
    boundary = [v for v in g.vertices if v != (1, 1)]
    w = merge_vertices(g, boundary)
    assert w.n == 2 and w.sink == "sink"
    assert w.degree((1, 1)) == 4


def test_merge_singleton_and_pair(k3):
    g, _ = k3
    same = merge_vertices(g, [3])
    assert same.n == 3 and same.m == 3
    two = merge_vertices(g, [1, 2])
    assert two.n == 2 and two.m == 2
    with pytest.raises(EmptyMergeSet):
        merge_vertices(g, [])


def test_json_round_trip(k3):
    g, rot = k3
    obj = graph_to_json(g, rot)
    g2, rot2 = graph_from_json(obj)
    assert g2.vertices == g.vertices and g2.sink == g.sink
    assert [(e.u, e.v, e.w) for e in g2.edges] == [(e.u, e.v, e.w) for e in g.edges]
    assert rot2 == rot


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.integers(2, 5))
def test_euler_on_grids(r, c):
    g, rot = families.grid(r, c)
    assert len(faces(g, rot)) - g.m + g.n == 2


def test_parallel_edges_allowed():
    g = WeightedGraph([0, 1], [(0, 1, 1), (0, 1, 2)])
    assert g.degree(0) == 3
