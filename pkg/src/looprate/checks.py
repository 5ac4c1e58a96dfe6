"""Identity checks between the closed formulas and the brute-force oracles.

Each check returns True/False for one graph; ``run_checks`` sweeps a default
set of small graphs and collects pass/fail counts per identity.
"""
from fractions import Fraction
from math import comb

import numpy as np

from . import families
from .errors import TooLarge
from .forests import (
    ORACLE_MAX_EDGES,
    brute_force_forests,
    brute_force_unicycles,
    connected_subgraph_counts,
    f2_minor,
    f2_positive,
    fk,
    level_variance,
    unicycles_via_dual,
)
from .kernels import tree_weight
from .looping import loop_stats, sand_density, tau_exact
from .sandpile import (
    level_moments,
    orient_tree,
    recurrent_configs,
    sandpile_to_tree,
    spanning_trees,
    stable_count,
    tree_to_sandpile,
)

SANDPILE_LIMIT = 10**5


def check_f2(graph):
    return f2_minor(graph) == brute_force_forests(graph, 2)


def check_f2_positive(graph):
    return f2_positive(graph) * tree_weight(graph) == f2_minor(graph)


def check_fk(graph, k):
    return fk(graph, k) * tree_weight(graph) == brute_force_forests(graph, k)


def check_duality(graph, rotation):
    return unicycles_via_dual(graph, rotation) == brute_force_unicycles(graph)


def is_unit(graph):
    return all(e.w == 1 for e in graph.edges)


def sandpile_ready(graph, s=None):
    return is_unit(graph) and stable_count(graph, s) <= SANDPILE_LIMIT


def check_bijection(graph, s=None, recurrent=None):
    s = graph.default_sink() if s is None else s
    recurrent = recurrent_configs(graph, s) if recurrent is None else recurrent
    seen = set()
    for ids in spanning_trees(graph):
        tree = orient_tree(graph, ids, s)
        c = tree_to_sandpile(tree, graph, s)
        if sandpile_to_tree(c) != tree:
            return False
        seen.add(c)
    return seen == set(recurrent)


def sandpile_report(graph, rotation, s=None):
    """Every sandpile identity on one unit-weight planar graph."""
    s = graph.default_sink() if s is None else s
    configs = recurrent_configs(graph, s)
    spectrum = {}
    for c in configs:
        spectrum[c.level()] = spectrum.get(c.level(), 0) + 1
    mean, var = level_moments(spectrum)
    n, m = graph.n, graph.m
    counts = connected_subgraph_counts(graph, max_edges=n + 1)
    slices = {}
    for j in range(3):
        lhs = sum(comb(k, j) * c for k, c in spectrum.items())
        rhs = counts[n - 1 + j] if n - 1 + j < len(counts) else 0
        slices[j] = lhs == rhs
    out = {
        "recurrent_count": len(configs) == tree_weight(graph, s),
        "bijection": check_bijection(graph, s, configs),
        "mean_level": mean == tau_exact(graph, rotation) * m,
        "connected_slices": all(slices.values()),
        "variance": var == level_variance(graph, rotation),
        "sand_density": Fraction(sum(c.total() for c in configs), len(configs) * n)
        == sand_density(graph, rotation, s),
    }
    return out


def check_looping(graph, rotation):
    st = loop_stats(graph, rotation)
    ok = st.rho - st.tau == st.edge_in_tree / 2 and st.lambda_ * st.tau == 1 - st.edge_in_tree
    if is_unit(graph):
        ok = ok and st.edge_in_tree == Fraction(graph.n - 1, graph.m)
    return ok


def default_graphs(seed=7):
    """(name, graph, rotation) for the standard sweep."""
    from .lattice import builtin, wired_patch

    out = [("K3", *families.triangle()), ("K3 weighted", *families.triangle(2, 3, 5))]
    for n in (3, 4, 5):
        out.append((f"C{n}", *families.cycle(n)))
    for n in (4, 5):
        out.append((f"W{n}", *families.wheel(n)))
    out.append(("K4", *families.complete4()))
    out.append(("grid 2x3", *families.grid(2, 3)))
    out.append(("grid 3x3", *families.grid(3, 3)))
    out.append(("wired square 2x2", *wired_patch(builtin("square"), 2)))
    rng = np.random.default_rng(seed)
    for k in range(6):
        out.append((f"random {k}", families.random_connected(rng, int(rng.integers(2, 7))), None))
    return out


def run_checks(max_edges=ORACLE_MAX_EDGES, graphs=None):
    """Pass/fail tallies per identity over every graph with at most ``max_edges`` edges."""
    if max_edges > ORACLE_MAX_EDGES:
        raise TooLarge(f"bound {max_edges} exceeds the oracle limit of {ORACLE_MAX_EDGES} edges")
    graphs = default_graphs() if graphs is None else graphs
    results = {}

    def record(name, ok):
        passed, total = results.get(name, (0, 0))
        results[name] = (passed + bool(ok), total + 1)

    used = 0
    for _, g, rot in graphs:
        if g.m > max_edges:
            continue
        used += 1
        record("forest_determinant_vs_oracle", check_f2(g))
        record("forest_kernel_vs_determinant", check_f2_positive(g))
        for k in (2, 3):
            if k <= g.n:
                record(f"k_forest_formula_k{k}", check_fk(g, k))
        if rot is not None:
            record("duality_unicycles", check_duality(g, rot))
            record("looping_identities", check_looping(g, rot))
            if sandpile_ready(g):
                for key, ok in sandpile_report(g, rot).items():
                    record(f"sandpile_{key}", ok)
    return results, used
