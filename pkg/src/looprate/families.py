"""Small embedded test graphs: cycles, paths, wheels, grids, K3, K4, stars.

Each constructor returns ``(graph, rotation)``; ``rotation`` is None for
graphs with bridges where no dual is wanted.
"""
import math

from .graph import WeightedGraph


def rotation_from_positions(graph, pos):
    """Counter-clockwise rotation system of a straight-line drawing."""
    rot = {}
    for v in graph.vertices:
        x0, y0 = pos[v]

        def angle(eid, v=v, x0=x0, y0=y0):
            x1, y1 = pos[graph.edge(eid).other(v)]
            return math.atan2(y1 - y0, x1 - x0)

        rot[v] = sorted(graph.incident[v], key=angle)
    return rot


def _circle(k, radius=1.0, phase=0.0):
    return [(radius * math.cos(phase + 2 * math.pi * i / k), radius * math.sin(phase + 2 * math.pi * i / k)) for i in range(k)]


def triangle(w12=1, w23=1, w13=1, sink=3):
    g = WeightedGraph([1, 2, 3], [(1, 2, w12), (2, 3, w23), (1, 3, w13)], sink=sink)
    return g, {1: [0, 2], 2: [0, 1], 3: [1, 2]}


def cycle(n, sink=None):
    verts = list(range(n))
    g = WeightedGraph(verts, [(i, (i + 1) % n, 1) for i in range(n)], sink=sink)
    return g, rotation_from_positions(g, dict(zip(verts, _circle(n))))


def path(n, sink=None):
    return WeightedGraph(range(n), [(i, i + 1, 1) for i in range(n - 1)], sink=sink), None


def star(n, sink=0):
    """Centre 0 joined to leaves 1..n."""
    return WeightedGraph(range(n + 1), [(0, i, 1) for i in range(1, n + 1)], sink=sink), None


def wheel(n, sink=None):
    """Hub 0 joined to an n-cycle 1..n (so W_n has n + 1 vertices)."""
    verts = list(range(n + 1))
    edges = [(i, i % n + 1, 1) for i in range(1, n + 1)] + [(0, i, 1) for i in range(1, n + 1)]
    g = WeightedGraph(verts, edges, sink=sink)
    pos = {0: (0.0, 0.0)}
    pos.update(zip(range(1, n + 1), _circle(n)))
    return g, rotation_from_positions(g, pos)


def complete4(sink=None):
    g = WeightedGraph(range(4), [(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (2, 3, 1), (1, 3, 1)], sink=sink)
    pos = {0: (0.0, 0.0)}
    pos.update(zip(range(1, 4), _circle(3)))
    return g, rotation_from_positions(g, pos)


def grid(rows, cols, sink=None, weight=1):
    """Free-boundary rows x cols grid with vertices (r, c)."""
    verts = [(r, c) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append(((r, c), (r, c + 1), weight))
            if r + 1 < rows:
                edges.append(((r, c), (r + 1, c), weight))
    g = WeightedGraph(verts, edges, sink=sink)
    return g, rotation_from_positions(g, {(r, c): (float(c), float(r)) for r, c in verts})


def random_connected(rng, n, extra=None, max_num=5, max_den=3, integer=False):
    """Random simple connected graph on 0..n-1 with rational (or integer) weights.

    A random spanning tree is laid down first, then ``extra`` further
    distinct edges.  ``rng`` is a numpy Generator.
    """
    from fractions import Fraction

    def weight():
        p = int(rng.integers(1, max_num + 1))
        if integer:
            return p
        return Fraction(p, int(rng.integers(1, max_den + 1)))

    order = [int(x) for x in rng.permutation(n)]
    pairs = set()
    for k in range(1, n):
        a, b = order[k], order[int(rng.integers(k))]
        pairs.add((min(a, b), max(a, b)))
    free = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in pairs]
    if extra is None:
        extra = int(rng.integers(0, len(free) + 1))
    for idx in rng.permutation(len(free))[: min(extra, len(free))]:
        pairs.add(free[int(idx)])
    edges = [(a, b, weight()) for a, b in sorted(pairs)]
    return WeightedGraph(range(n), edges)
