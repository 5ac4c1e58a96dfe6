from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from looprate import families
from looprate.errors import NonIntegerWeight, NotATree, NotRecurrent, TooLarge, Unstable, VertexStable
from looprate.graph import WeightedGraph
from looprate.lattice import builtin, wired_patch
from looprate.sandpile import (
    SandpileConfig,
    binomial_moment,
    is_recurrent,
    is_recurrent_dhar,
    level_moments,
    level_spectrum,
    mean_sand_per_vertex,
    orient_tree,
    recurrent_configs,
    sandpile_to_tree,
    spanning_trees,
    stabilize,
    stable_configs,
    topple,
    tree_to_sandpile,
)


def house():
    return WeightedGraph(["s", "v1", "v2"], [("v1", "v2", 1), ("v1", "s", 1), ("v2", "s", 1)], sink="s")


def hc(g, a, b):
    return SandpileConfig(g, {"v1": a, "v2": b})


def test_topple_examples():
    g, _ = wired_patch(builtin("square"), 1)
    c = SandpileConfig(g, {("o", 0, 0): 4})
    assert topple(c, ("o", 0, 0)).heights == {("o", 0, 0): 0}
    h = house()
    assert topple(hc(h, 2, 2), "v1") == hc(h, 0, 3)
    with pytest.raises(VertexStable):
        topple(hc(h, 1, 1), "v1")


def test_stabilize_examples():
    h = house()
    out, counts = stabilize(hc(h, 2, 2))
    assert out == hc(h, 1, 1)
    assert counts == {"v1": 1, "v2": 1}
    out, counts = stabilize(hc(h, 1, 0))
    assert out == hc(h, 1, 0) and counts == {"v1": 0, "v2": 0}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_abelian_property(seed):
    rng = np.random.default_rng(seed)
    g, _ = families.grid(3, 3)
    heights = {v: int(rng.integers(0, 9)) for v in g.vertices}
    c = SandpileConfig(g, heights, sink=(0, 0))
    fifo = stabilize(c)
    shuffled = stabilize(c, rng=rng)
    assert fifo == shuffled


def test_burning_test_examples():
    h = house()
    assert is_recurrent(hc(h, 1, 1))
    assert not is_recurrent(hc(h, 0, 0))
    assert sum(is_recurrent(c) for c in stable_configs(h)) == 3
    with pytest.raises(Unstable):
        is_recurrent(hc(h, 2, 0))


def test_two_burning_rules_agree():
    g, _ = families.wheel(4)
    for c in stable_configs(g):
        assert is_recurrent(c) == is_recurrent_dhar(c)


def test_tree_to_sandpile_house():
    h = house()
    got = {tree_to_sandpile(orient_tree(h, ids, "s"), h, "s") for ids in spanning_trees(h)}
    assert got == {hc(h, 1, 1), hc(h, 0, 1), hc(h, 1, 0)}
    assert got == set(recurrent_configs(h))


def test_single_vertex_patch_trees():
    g, _ = wired_patch(builtin("square"), 1)
    v = ("o", 0, 0)
    heights = sorted(tree_to_sandpile({v: e.id}, g, "sink").heights[v] for e in g.edges)
    assert heights == [0, 1, 2, 3]
    first = min(g.incident[v], key=lambda eid: g.edge_pos[eid])
    assert tree_to_sandpile({v: first}, g, "sink").heights[v] == 3


def test_star_rooted_at_sink():
    g, _ = families.star(4)
    tree = {i: i - 1 for i in range(1, 5)}
    assert tree_to_sandpile(tree, g, 0).heights == {i: 0 for i in range(1, 5)}


@pytest.mark.parametrize("make", [
    lambda: (house(), "s"),
    lambda: (wired_patch(builtin("square"), 2)[0], "sink"),
    lambda: (families.wheel(5)[0], 0),
    lambda: (wired_patch(builtin("triangular"), 2)[0], "sink"),
])
def test_round_trip(make):
    g, s = make()
    seen = set()
    for ids in spanning_trees(g):
        tree = orient_tree(g, ids, s)
        c = tree_to_sandpile(tree, g, s)
        assert sandpile_to_tree(c) == tree
        seen.add(c)
    assert seen == set(recurrent_configs(g, s))


def test_bijection_errors():
    h = house()
    with pytest.raises(NotRecurrent):
        sandpile_to_tree(hc(h, 0, 0))
    with pytest.raises(NotATree):
        tree_to_sandpile({"v1": 0, "v2": 0}, h, "s")
    with pytest.raises(NotATree):
        tree_to_sandpile({"v1": 1}, h, "s")


def test_weighted_inputs():
    g, _ = families.triangle(1, 2, 1)
    assert len(recurrent_configs(g)) == 5
    with pytest.raises(NonIntegerWeight):
        tree_to_sandpile({1: 2, 2: 1}, g, 3)
    g, _ = families.triangle(F(1, 2), 1, 1)
    with pytest.raises(NonIntegerWeight):
        SandpileConfig(g, {1: 0, 2: 0})


def test_level_spectrum_house():
    h = house()
    spec = level_spectrum(h)
    assert spec == {0: 2, 1: 1}
    mean, _ = level_moments(spec)
    assert mean == F(1, 3) == F(1, 9) * 3
    assert binomial_moment(spec, 2) == 0


def test_level_range_and_mean_sand():
    g, _ = families.grid(2, 3)
    for c in recurrent_configs(g):
        assert 0 <= c.level() <= g.m - g.n + 1
    assert mean_sand_per_vertex(house()) == F(4, 9)


def test_enumeration_limit(monkeypatch):
    import looprate.sandpile as sp

    monkeypatch.setattr(sp, "ENUMERATION_LIMIT", 10)
    with pytest.raises(TooLarge):
        level_spectrum(families.wheel(4)[0])
