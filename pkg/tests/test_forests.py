from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from looprate import families
from looprate.errors import BridgePresent, KOutOfRange, TooLarge
from looprate.forests import (
    brute_force_forests,
    brute_force_unicycles,
    connected_subgraph_counts,
    f2_minor,
    f2_positive,
    fk,
    forest_polynomial,
    level_variance,
    unicycles_via_dual,
)
from looprate.graph import WeightedGraph
from looprate.kernels import kernel_for, tree_weight
from looprate.sandpile import level_moments, level_spectrum

from conftest import random_graph


def test_f2_minor_examples():
    assert f2_minor(families.triangle()[0]) == 3
    assert f2_minor(families.path(3)[0]) == 2
    assert f2_minor(families.cycle(4)[0]) == 6


def test_f2_positive_examples():
    g, _ = families.triangle()
    assert f2_positive(g, 3) == 1
    w = F(5, 3)
    k2 = WeightedGraph([1, 2], [(1, 2, w)], sink=2)
    A = kernel_for(k2)
    assert A(2, 1) == 0
    assert f2_positive(k2) == 1 / w


def test_fk_examples():
    g, _ = families.triangle()
    assert fk(g, 1) == 1
    assert fk(g, 2) == 1
    assert fk(g, 3) == F(1, 3)
    with pytest.raises(KOutOfRange):
        fk(g, 4)
    with pytest.raises(KOutOfRange):
        fk(g, 0)


def test_unicycle_examples():
    assert unicycles_via_dual(*families.triangle()) == 1
    assert unicycles_via_dual(*families.cycle(4)) == 1
    g, rot = families.grid(2, 3)
    assert unicycles_via_dual(g, rot) == brute_force_unicycles(g)


def test_level_variance_examples():
    assert level_variance(*families.triangle()) == F(2, 9)
    g = WeightedGraph([0, 1], [(0, 1, 1)])
    with pytest.raises(BridgePresent):
        level_variance(g, {0: [0], 1: [0]})
    g, rot = families.wheel(4)
    _, var = level_moments(level_spectrum(g))
    assert level_variance(g, rot) == var


def test_oracle_examples_and_limit():
    k3, _ = families.triangle()
    assert brute_force_forests(k3, 1) == 3
    assert brute_force_forests(k3, 2) == 3
    assert brute_force_forests(families.cycle(4)[0], 2) == 6
    big, _ = families.grid(4, 5)  # 31 edges
    with pytest.raises(TooLarge):
        brute_force_forests(big, 2)


def test_forest_count_edges():
    g, _ = families.wheel(4)
    assert brute_force_forests(g, g.n) == 1
    assert brute_force_forests(g, g.n + 1) == 0
    poly = forest_polynomial(g)
    assert poly[g.n - 1] == tree_weight(g)


def test_connected_counts_match_brute_force():
    g, _ = families.wheel(4)
    counts = connected_subgraph_counts(g)
    assert counts[g.n - 1] == tree_weight(g)
    assert counts[g.n] == brute_force_unicycles(g)
    assert counts[g.m] == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_forest_formulas_agree(seed):
    g = random_graph(seed, n_max=7)
    F1 = tree_weight(g)
    oracle = brute_force_forests(g, 2)
    assert f2_minor(g) == oracle
    assert f2_positive(g) * F1 == oracle
    assert fk(g, 2) * F1 == oracle


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_f2_minor_sink_independent(seed):
    g = random_graph(seed, n_max=6)
    assert len({f2_minor(g, s) for s in g.vertices}) == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([3, 4]))
def test_fk_matches_oracle(seed, k):
    g = random_graph(seed, n_max=6)
    if k > g.n:
        return
    assert fk(g, k) * tree_weight(g) == brute_force_forests(g, k)
