"""Spanning-forest and unicycle counts, exact formulas and brute-force oracles.

The determinant formula for two-component forests, its positive-term
rewrite in terms of the potential kernel, the general k-forest formula in
terms of principal minors of the Green's function, unicycle counts through
planar duality and the variance of the sandpile level all live here.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm

import numpy as np

from . import numerics as nm
from .errors import KOutOfRange, TooLarge
from .graph import dual
from .kernels import green, kernel_for, laplacian, tree_weight

ORACLE_MAX_EDGES = 24


@dataclass(frozen=True)
class ForestCount:
    k: int
    value: object


def f2_minor(graph, s=None, backend=nm.EXACT):
    """F_2 as a signed sum of Laplacian minors; independent of ``s``."""
    s = graph.default_sink() if s is None else s
    L = laplacian(graph, backend)
    ks = graph.index[s]
    total = sum(
        (nm.determinant(nm.submatrix_minor(L, [i, ks], [i, ks])) for i in range(graph.n) if i != ks),
        Fraction(0),
    )
    for e in graph.edges:
        if s in (e.u, e.v):
            continue
        drop = [graph.index[e.u], graph.index[e.v], ks]
        total -= nm.to_scalar(e.w, backend) * nm.determinant(nm.submatrix_minor(L, drop, drop))
    return total


def f2_positive(graph, s=None, kernel=None, backend=nm.EXACT):
    """F_2 / F_1 as a sum of non-negative edge terms in the potential kernel."""
    A = kernel if kernel is not None else kernel_for(graph, s, backend)
    total = Fraction(0)
    for e in graph.edges:
        a, b = A(e.u, e.v), A(e.v, e.u)
        total += e.w * ((a - b) ** 2 + a * b)
    return total


def _scaled_integer(M):
    """Write an exact matrix as N / D with N integral."""
    D = lcm(*(x.denominator for row in M for x in row)) if M else 1
    return [[int(x * D) for x in row] for row in M], D


def fk(graph, k, s=None, backend=nm.EXACT):
    """F_k / F_1 from principal minors of the Green's function.

    Alternating sum over h of (-1)^h times, for every set of h edges and
    every set of k-1-h vertices, the product of edge weights and the
    principal minor of G on all those indices.  Index sets with a repeated
    vertex or the sink have zero minor and are not visited.
    """
    if not 1 <= k <= graph.n:
        raise KOutOfRange(f"k={k} outside 1..{graph.n}")
    if k == 1:
        return Fraction(1) if backend == nm.EXACT else 1.0
    s = graph.default_sink() if s is None else s
    gf = green(graph, s, backend)
    ks = graph.index[s]
    verts = [i for i in range(graph.n) if i != ks]
    edges = [
        (graph.index[e.u], graph.index[e.v], nm.to_scalar(e.w, backend))
        for e in graph.edges
        if s not in (e.u, e.v)
    ]
    if backend == nm.EXACT:
        N, D = _scaled_integer(gf.matrix)

        def minor(idx):
            return nm.integer_determinant([[N[i][j] for j in idx] for i in idx])

    else:
        M = gf.matrix

        def minor(idx):
            return float(np.linalg.det(M[np.ix_(idx, idx)]))

    total = Fraction(0) if backend == nm.EXACT else 0.0
    for h in range(k):
        m = k - 1 - h
        part = Fraction(0) if backend == nm.EXACT else 0.0
        for eset in combinations(edges, h):
            ends = []
            wprod = 1
            for i, j, w in eset:
                ends += (i, j)
                wprod = wprod * w
            if len(set(ends)) != len(ends):
                continue
            used = set(ends)
            free = [v for v in verts if v not in used]
            for vset in combinations(free, m):
                part += wprod * minor(ends + list(vset))
        if backend == nm.EXACT:
            part = part / Fraction(D) ** (k - 1 + h)
        total += -part if h % 2 else part
    return total


def forest_count(graph, k, s=None, backend=nm.EXACT):
    return ForestCount(k, fk(graph, k, s, backend) * tree_weight(graph, s, backend))


# ---------------------------------------------------------------------------
# planar duality


def unicycles_via_dual(graph, rotation):
    """Weighted sum of spanning unicycles = F_2(dual) * prod w(e)."""
    d = dual(graph, rotation)
    prod = Fraction(1)
    for e in graph.edges:
        prod *= e.w
    return f2_minor(d.graph) * prod


def dual_forest_ratios(graph, rotation, backend=nm.EXACT):
    """(F_2/F_1, F_3/F_1) of the planar dual."""
    d = dual(graph, rotation).graph
    r2 = fk(d, 2, backend=backend) if d.n >= 2 else Fraction(0)
    r3 = fk(d, 3, backend=backend) if d.n >= 3 else Fraction(0)
    return r2, r3


def level_variance(graph, rotation, backend=nm.EXACT):
    """Variance of the level of a uniform recurrent sandpile, from dual forests."""
    r2, r3 = dual_forest_ratios(graph, rotation, backend)
    return 2 * r3 + r2 - r2 * r2


# ---------------------------------------------------------------------------
# oracles


def _check_size(graph):
    if graph.m > ORACLE_MAX_EDGES:
        raise TooLarge(f"{graph.m} edges exceeds the oracle limit of {ORACLE_MAX_EDGES}")


class _UnionFind:
    """Union by size with an undo log, for backtracking."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n
        self.log = []

    def find(self, x):
        p = self.parent
        while p[x] != x:
            x = p[x]
        return x

    def union(self, a, b):
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        self.log.append(b)

    def undo(self):
        b = self.log.pop()
        a = self.parent[b]
        self.parent[b] = b
        self.size[a] -= self.size[b]


def _indexed_edges(graph):
    return [(graph.index[e.u], graph.index[e.v], e.w) for e in graph.edges]


def forest_polynomial(graph):
    """Weighted forest sums by edge count: ``{j: F_{|V|-j}}``, exhaustive."""
    _check_size(graph)
    edges = _indexed_edges(graph)
    uf = _UnionFind(graph.n)
    out = {}

    def rec(pos, count, weight):
        out[count] = out.get(count, 0) + weight
        for p in range(pos, len(edges)):
            i, j, w = edges[p]
            ri, rj = uf.find(i), uf.find(j)
            if ri != rj:
                uf.union(ri, rj)
                rec(p + 1, count + 1, weight * w)
                uf.undo()

    rec(0, 0, Fraction(1))
    return out


def brute_force_forests(graph, k):
    """F_k by scanning every acyclic edge subset with |V| - k edges."""
    _check_size(graph)
    target = graph.n - k
    if target < 0:
        return Fraction(0)
    edges = _indexed_edges(graph)
    m = len(edges)
    uf = _UnionFind(graph.n)
    total = Fraction(0)

    def rec(pos, count, weight):
        nonlocal total
        if count == target:
            total += weight
            return
        for p in range(pos, m - (target - count) + 1):
            i, j, w = edges[p]
            ri, rj = uf.find(i), uf.find(j)
            if ri != rj:
                uf.union(ri, rj)
                rec(p + 1, count + 1, weight * w)
                uf.undo()

    rec(0, 0, Fraction(1))
    return total


def brute_force_unicycles(graph):
    """Weighted sum of connected spanning subgraphs with |V| edges."""
    _check_size(graph)
    edges = _indexed_edges(graph)
    n = graph.n
    total = Fraction(0)
    for subset in combinations(edges, n):
        uf = _UnionFind(n)
        parts = n
        for i, j, _ in subset:
            ri, rj = uf.find(i), uf.find(j)
            if ri != rj:
                uf.union(ri, rj)
                parts -= 1
        if parts == 1:
            w = Fraction(1)
            for *_, x in subset:
                w *= x
            total += w
    return total


def connected_subgraph_counts(graph, max_edges=None):
    """Weighted counts of connected spanning subgraphs by number of edges.

    Exact inclusion-exclusion over vertex subsets: the subgraphs induced on a
    set S are split by the component of S's lowest vertex.  Returns a list
    indexed by edge count, truncated at ``max_edges``.
    """
    n = graph.n
    if n > 20:
        raise TooLarge(f"{n} vertices is too many for subset recursion")
    top = graph.m if max_edges is None else min(max_edges, graph.m)
    size = top + 1
    integral = all(isinstance(e.w, Fraction) and e.w.denominator == 1 for e in graph.edges)
    dtype = np.int64 if integral and graph.m < 60 else object
    edges = [(1 << graph.index[e.u]) | (1 << graph.index[e.v]) for e in graph.edges]
    weights = [int(e.w) if integral else e.w for e in graph.edges]

    def mul(a, b):
        return np.convolve(a, b)[:size]

    full = (1 << n) - 1
    inside = {}
    for S in range(1, full + 1):
        poly = np.zeros(size, dtype=dtype)
        poly[0] = 1
        for mask, w in zip(edges, weights):
            if mask & S == mask:
                term = np.zeros(2, dtype=dtype)
                term[0], term[1] = 1, w
                poly = mul(poly, term)
        inside[S] = poly
    conn = {}
    for S in range(1, full + 1):
        low = S & -S
        rest = S ^ low
        if rest == 0:
            conn[S] = inside[S]
            continue
        acc = inside[S].copy()
        T = rest
        # proper subsets T' of S containing low: T' = low | sub, sub ⊊ rest
        while True:
            T = (T - 1) & rest
            sub = T
            Tp = low | sub
            acc = acc - mul(conn[Tp], inside[S ^ Tp])
            if sub == 0:
                break
        conn[S] = acc
    out = conn[full]
    return [Fraction(int(x)) if dtype is np.int64 else Fraction(x) for x in out]
