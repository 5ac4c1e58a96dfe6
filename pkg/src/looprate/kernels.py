"""Graph Laplacian and the Green's function and potential kernel built from it."""
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from . import numerics as nm
from .errors import UnknownEndpoint


def laplacian(graph, backend=None):
    """Weighted Laplacian indexed by ``graph.vertices``; parallel edges add up."""
    backend = nm.choose_backend(graph.n, backend)
    n = graph.n
    idx = graph.index
    if backend == nm.FLOAT:
        L = np.zeros((n, n))
    else:
        zero = Fraction(0)
        L = [[zero] * n for _ in range(n)]
    for e in graph.edges:
        w = nm.to_scalar(e.w, backend)
        i, j = idx[e.u], idx[e.v]
        L[i][i] += w
        L[j][j] += w
        L[i][j] -= w
        L[j][i] -= w
    return L


def sparse_laplacian(graph):
    """Float Laplacian in CSR form, for patches too big for dense storage."""
    rows, cols, vals = [], [], []
    idx = graph.index
    for e in graph.edges:
        w = float(e.w)
        i, j = idx[e.u], idx[e.v]
        rows += [i, j, i, j]
        cols += [i, j, j, i]
        vals += [w, w, -w, -w]
    return sp.csr_matrix((vals, (rows, cols)), shape=(graph.n, graph.n))


def reduced_laplacian(graph, s, backend=None):
    L = laplacian(graph, backend)
    k = graph.index[s]
    return nm.submatrix_minor(L, [k], [k])


def tree_weight(graph, root=None, backend=None):
    """Weighted number of spanning trees, det of the Laplacian reduced at ``root``."""
    root = graph.default_sink() if root is None else root
    return nm.determinant(reduced_laplacian(graph, root, backend))


class GreenFunction:
    """G^{(s)} on all vertex pairs; rows and columns at the sink are zero."""

    def __init__(self, graph, sink, matrix, backend):
        self.graph = graph
        self.sink = sink
        self.matrix = matrix
        self.backend = backend
        self.index = graph.index

    def __call__(self, u, v):
        return self.matrix[self.index[u]][self.index[v]]

    def __repr__(self):
        return f"GreenFunction(sink={self.sink!r}, backend={self.backend})"


def green(graph, s=None, backend=None):
    """Green's function with Dirichlet condition at ``s``.

    Solves the reduced Laplacian against every unit column; the sink row and
    column are padded with zeros.
    """
    s = graph.default_sink() if s is None else s
    if s not in graph.index:
        raise UnknownEndpoint(f"{s!r} is not a vertex")
    backend = nm.choose_backend(graph.n, backend)
    k = graph.index[s]
    inv = nm.inverse(reduced_laplacian(graph, s, backend))
    n = graph.n
    keep = [i for i in range(n) if i != k]
    if backend == nm.FLOAT:
        G = np.zeros((n, n))
        G[np.ix_(keep, keep)] = inv
    else:
        zero = Fraction(0)
        G = [[zero] * n for _ in range(n)]
        for a, i in enumerate(keep):
            row, src = G[i], inv[a]
            for b, j in enumerate(keep):
                row[j] = src[b]
    return GreenFunction(graph, s, G, backend)


def green_columns(graph, s, sources, backend=None, tol=1e-10):
    """Selected columns of G^{(s)} as ``{source: {vertex: value}}``.

    Large float problems go through Jacobi-preconditioned CG on the sparse
    reduced Laplacian, which is symmetric positive definite.
    """
    backend = nm.choose_backend(graph.n, backend)
    k = graph.index[s]
    keep = [v for v in graph.vertices if v != s]
    pos = {v: i for i, v in enumerate(keep)}
    out = {}
    if backend == nm.FLOAT and graph.n > nm.EXACT_MAX_VERTICES:
        L = sparse_laplacian(graph)
        mask = np.ones(graph.n, dtype=bool)
        mask[k] = False
        R = L[mask][:, mask].tocsr()
        diag = R.diagonal()
        for src in sources:
            b = np.zeros(len(keep))
            if src != s:
                b[pos[src]] = 1.0
            x = nm.pcg(R, b, tol=tol, diag=diag)
            col = {v: float(x[pos[v]]) for v in keep}
            col[s] = 0.0
            out[src] = col
        return out
    R = reduced_laplacian(graph, s, backend)
    for src in sources:
        if backend == nm.FLOAT:
            b = np.zeros(len(keep))
            if src != s:
                b[pos[src]] = 1.0
            zero = 0.0
        else:
            b = [Fraction(int(v == src)) for v in keep]
            zero = Fraction(0)
        x = nm.solve(R, b)
        col = {v: x[pos[v]] for v in keep}
        col[s] = zero
        out[src] = col
    return out


class PotentialKernel:
    """A^{(s)}_{u,v} = G_{u,u} - G_{u,v} on both orientations of every edge."""

    def __init__(self, graph, sink, values):
        self.graph = graph
        self.sink = sink
        self.values = values

    def __call__(self, u, v):
        return self.values[(u, v)]

    def current(self, u, v, w):
        return w * self.values[(u, v)]

    def outflow(self, u):
        """Sum of w_{u,v} A_{u,v} over edges at ``u``: 1 off the sink, 0 at it."""
        g = self.graph
        return sum(
            (g.edge(eid).w * self.values[(u, g.edge(eid).other(u))] for eid in g.incident[u]),
            Fraction(0),
        )

    def __repr__(self):
        return f"PotentialKernel(sink={self.sink!r}, {len(self.values)} directed values)"


def potential_kernel(gf):
    g = gf.graph
    vals = {}
    for e in g.edges:
        for a, b in ((e.u, e.v), (e.v, e.u)):
            if (a, b) not in vals:
                vals[(a, b)] = gf(a, a) - gf(a, b)
    return PotentialKernel(g, gf.sink, vals)


def kernel_for(graph, s=None, backend=None):
    return potential_kernel(green(graph, s, backend))


def local_kernel(graph, u, v, s=None, backend=None):
    """(A_{u,v}, A_{v,u}) from two Green's function columns only."""
    s = graph.default_sink() if s is None else s
    cols = green_columns(graph, s, [u, v], backend)
    return cols[u][u] - cols[u][v], cols[v][v] - cols[v][u]


def edge_in_tree_prob(kernel, edge):
    """Probability that ``edge`` lies in a weighted-random spanning tree."""
    if not hasattr(edge, "u"):
        edge = kernel.graph.edge(edge)
    return edge.w * (kernel(edge.u, edge.v) + kernel(edge.v, edge.u))
