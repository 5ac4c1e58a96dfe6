"""Exact looping statistics on a few small planar graphs, with the sandpile
side computed by brute force next to the closed formulas.

    python3 demos/small_graphs.py
"""
from looprate import families, loop_stats, tree_weight, f2_minor, unicycles_via_dual
from looprate.forests import level_variance
from looprate.lattice import builtin, wired_patch
from looprate.sandpile import level_moments, level_spectrum


def show(name, graph, rotation):
    st = loop_stats(graph, rotation)
    print(f"{name}: |V|={graph.n} |E|={graph.m}")
    print(f"  trees {tree_weight(graph)}, 2-forests {f2_minor(graph)}, unicycles {unicycles_via_dual(graph, rotation)}")
    print(f"  tau {st.tau}  rho {st.rho}  lambda {st.lambda_}  sand density {st.sand_density}")
    if all(e.w == 1 for e in graph.edges) and graph.n <= 12:
        mean, var = level_moments(level_spectrum(graph))
        print(f"  level spectrum {level_spectrum(graph)}")
        print(f"  mean level {mean} = tau*|E| = {st.tau * graph.m};  variance {var} = {level_variance(graph, rotation)}")


if __name__ == "__main__":
    show("triangle", *families.triangle())
    show("4-cycle", *families.cycle(4))
    show("wheel W5", *families.wheel(5))
    show("wired 2x2 square patch", *wired_patch(builtin("square"), 2))
    show("weighted triangle (2, 3, 5)", *families.triangle(2, 3, 5))
