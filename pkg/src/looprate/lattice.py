"""Periodic planar lattices with their potential kernels, plus the finite
wired patches used to check those kernels numerically.

Coordinates are fractional coordinates in the lattice basis; the built-in
drawings are straight-line planar in those coordinates, which is all the
patch embedding needs.
"""
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy
from scipy import integrate

from . import numerics as nm
from .errors import (
    MissingKernel,
    NonPositiveBeta,
    QuadratureNotConverged,
    UnknownLattice,
)
from .graph import WeightedGraph
from .kernels import green_columns
from .looping import LoopStats

BETA = sympy.Symbol("beta", positive=True)
ALPHA = sympy.Symbol("alpha", positive=True)
SINK = "sink"


def _ratmaker(beta):
    """Constructor for exact constants matching the type of ``beta``."""
    if isinstance(beta, sympy.Basic):
        return sympy.Rational
    if isinstance(beta, float):
        return lambda p, q=1: p / q
    return Fraction


@dataclass(frozen=True)
class EdgeClass:
    i: str
    j: str
    offset: tuple
    weight: object
    a_ij: object = None
    a_ji: object = None


@dataclass
class LatticeSpec:
    name: str
    types: list
    positions: dict
    edges: list
    dual_name: str = None
    beta: object = 1
    provenance: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def n_types(self):
        return len(self.types)

    def degree(self, t):
        return sum((e.weight for e in self.edges if t in (e.i, e.j)), 0 * self.edges[0].weight)

    def edge_degree(self, t):
        """Unweighted number of incident edges."""
        return sum((e.i == t) + (e.j == t) for e in self.edges)

    @property
    def delta(self):
        """Mean weighted degree."""
        return 2 * sum((e.weight for e in self.edges), 0 * self.edges[0].weight) / self.n_types

    @property
    def n_faces(self):
        # Euler on the torus: V - E + F = 0 per fundamental domain
        return len(self.edges) - self.n_types

    @property
    def delta_star(self):
        """Mean face degree."""
        return Fraction(2 * len(self.edges), self.n_faces)

    def has_kernels(self):
        return all(e.a_ij is not None and e.a_ji is not None for e in self.edges)

    def handshake_ok(self):
        return sum(self.edge_degree(t) for t in self.types) == 2 * len(self.edges)

    def dual(self):
        if self.dual_name is None:
            raise MissingKernel(f"{self.name} has no registered dual lattice")
        return builtin(self.dual_name, self.beta)


# ---------------------------------------------------------------------------
# built-in lattices
#
# Kernel values come from symmetry: A = 1/degree where all neighbours of a
# vertex are equivalent, harmonicity at degree-3 vertices for triakis, and
# w(A + A') + w*(A* + A*') = 1 across each primal/dual edge pair.


def _square(b, Q):
    q = Q(1, 4)
    return LatticeSpec(
        "square", ["o"], {"o": (0.5, 0.5)},
        [EdgeClass("o", "o", (1, 0), Q(1), q, q), EdgeClass("o", "o", (0, 1), Q(1), q, q)],
        "square", provenance="four equivalent neighbours: A = 1/4",
    )


def _triangular(b, Q):
    q = Q(1, 6)
    return LatticeSpec(
        "triangular", ["o"], {"o": (0.5, 0.5)},
        [EdgeClass("o", "o", off, Q(1), q, q) for off in ((1, 0), (0, 1), (1, 1))],
        "honeycomb", provenance="six equivalent neighbours: A = 1/6",
    )


def _honeycomb(b, Q):
    q = Q(1, 3)
    return LatticeSpec(
        "honeycomb", ["a", "b"], {"a": (1 / 3, 1 / 3), "b": (2 / 3, 2 / 3)},
        [EdgeClass("a", "b", off, Q(1), q, q) for off in ((0, 0), (-1, 0), (0, -1))],
        "triangular", provenance="three equivalent neighbours: A = 1/3",
    )


def _kagome(b, Q):
    q = Q(1, 4)
    pairs = [("a", "b", (0, 0)), ("a", "c", (0, 0)), ("b", "c", (0, 0)),
             ("a", "b", (-1, 0)), ("a", "c", (0, -1)), ("b", "c", (1, -1))]
    return LatticeSpec(
        "kagome", ["a", "b", "c"], {"a": (0.25, 0.25), "b": (0.75, 0.25), "c": (0.25, 0.75)},
        [EdgeClass(i, j, off, Q(1), q, q) for i, j, off in pairs],
        "dice", provenance="four equivalent neighbours: A = 1/4",
    )


def _dice(b, Q):
    # A_{u,v} = 1/deg(u) since every neighbour of u is equivalent
    lo, hi = Q(1, 3), Q(1, 6)
    edges = [EdgeClass("U", "h", off, Q(1), lo, hi) for off in ((0, 0), (0, -1), (-1, 0))]
    edges += [EdgeClass("D", "h", off, Q(1), lo, hi) for off in ((0, 0), (1, 0), (0, 1))]
    return LatticeSpec(
        "dice", ["h", "U", "D"], {"h": (0.5, 0.5), "U": (1 / 6, 1 / 6), "D": (5 / 6, 5 / 6)},
        edges, "kagome", provenance="A = 1/deg(u): 1/3 from degree-3 ends, 1/6 from degree-6 ends",
    )


def _fisher(b, Q):
    # intertriangle edges carry weight 1/beta (dual to the weight-beta triakis edges)
    inter = b * (b + 1) / (3 * b + 2)
    intra = (2 * b + 1) / (2 * (3 * b + 2))
    one = Q(1)
    edges = [EdgeClass(i, j, (0, 0), one, intra, intra)
             for i, j in (("a1", "a2"), ("a2", "a3"), ("a1", "a3"), ("b1", "b2"), ("b2", "b3"), ("b1", "b3"))]
    edges += [EdgeClass("a1", "b1", (0, 0), 1 / b, inter, inter),
              EdgeClass("a2", "b2", (-1, 0), 1 / b, inter, inter),
              EdgeClass("a3", "b3", (0, -1), 1 / b, inter, inter)]
    pos = {"a1": (5 / 12, 5 / 12), "a2": (1 / 6, 5 / 12), "a3": (5 / 12, 1 / 6),
           "b1": (7 / 12, 7 / 12), "b2": (5 / 6, 7 / 12), "b3": (7 / 12, 5 / 6)}
    return LatticeSpec(
        "fisher", ["a1", "a2", "a3", "b1", "b2", "b3"], pos, edges, "triakis_triangular", b,
        provenance="primal-dual relation against triakis, then unit flow at each vertex",
    )


def _triakis(b, Q):
    a_oo = 1 / (6 * b + 4)
    a_ot = 1 / (9 * b + 6)
    a_to = Q(1, 3)
    edges = [EdgeClass("o", "o", off, b, a_oo, a_oo) for off in ((1, 0), (0, 1), (1, 1))]
    edges += [EdgeClass("L", "o", off, Q(1), a_to, a_ot) for off in ((0, 0), (1, 0), (1, 1))]
    edges += [EdgeClass("U", "o", off, Q(1), a_to, a_ot) for off in ((0, 0), (0, 1), (1, 1))]
    pos = {"o": (0.1, 0.1), "L": (2 / 3 + 0.1, 1 / 3 + 0.1), "U": (1 / 3 + 0.1, 2 / 3 + 0.1)}
    return LatticeSpec(
        "triakis_triangular", ["o", "L", "U"], pos, edges, "fisher", b,
        provenance="harmonicity at degree-3 vertices gives A_ot = (2/3) A_oo; unit flow at o",
    )


def _square_octagon(b, Q, a=ALPHA):
    sq = Q(1, 4) + a * b / 2
    inter = b / 2 - a * b * b
    edges = [EdgeClass(i, j, (0, 0), Q(1), sq, sq) for i, j in (("E", "N"), ("N", "W"), ("W", "S"), ("S", "E"))]
    edges += [EdgeClass("E", "W", (1, 0), 1 / b, inter, inter), EdgeClass("N", "S", (0, 1), 1 / b, inter, inter)]
    pos = {"E": (0.75, 0.5), "N": (0.5, 0.75), "W": (0.25, 0.5), "S": (0.5, 0.25)}
    return LatticeSpec(
        "square_octagon", ["E", "N", "W", "S"], pos, edges, "tetrakis_square", b,
        provenance="primal-dual relation against tetrakis, then unit flow at each vertex",
    )


def _tetrakis(b, Q, a=ALPHA):
    edges = [EdgeClass("o", "o", off, b, a, a) for off in ((1, 0), (0, 1))]
    edges += [EdgeClass("c", "o", off, Q(1), Q(1, 4), Q(1, 4) - a * b) for off in ((0, 0), (1, 0), (0, 1), (1, 1))]
    return LatticeSpec(
        "tetrakis_square", ["o", "c"], {"o": (0.25, 0.25), "c": (0.75, 0.75)}, edges, "square_octagon", b,
        provenance="A = 1/4 at degree-4 centres; alpha between degree-8 vertices; unit flow",
    )


_BUILDERS = {
    "square": _square,
    "triangular": _triangular,
    "honeycomb": _honeycomb,
    "kagome": _kagome,
    "dice": _dice,
    "fisher": _fisher,
    "triakis_triangular": _triakis,
    "square_octagon": _square_octagon,
    "tetrakis_square": _tetrakis,
}
NAMES = list(_BUILDERS)
ALIASES = {"triakis": "triakis_triangular", "tetrakis": "tetrakis_square", "kagomé": "kagome"}
TABLE_ORDER = ["square", "triangular", "honeycomb", "kagome", "dice", "fisher",
               "triakis_triangular", "square_octagon", "tetrakis_square"]
ALPHA_LATTICES = {"square_octagon", "tetrakis_square"}


def builtin(name, beta=1):
    """Built-in lattice ``name``; ``beta`` may be a number or the symbol BETA."""
    key = ALIASES.get(name, name)
    if key not in _BUILDERS:
        raise UnknownLattice(f"unknown lattice {name!r}; choose from {', '.join(NAMES)}")
    if not isinstance(beta, sympy.Basic):
        if beta <= 0:
            raise NonPositiveBeta(f"beta must be positive, got {beta}")
        if not isinstance(beta, float):
            beta = Fraction(beta)
    Q = _ratmaker(beta)
    spec = _BUILDERS[key](beta, Q)
    spec.beta = beta
    return spec


def from_json(obj):
    """User lattice from {"vertices": [{"id", "degree"}], "edges": [{"from", "to", "offset", "weight"}]}."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    types = [str(v["id"]) for v in obj["vertices"]]
    edges = [
        EdgeClass(str(e["from"]), str(e["to"]), tuple(e.get("offset", (0, 0))), Fraction(str(e.get("weight", 1))))
        for e in obj["edges"]
    ]
    spec = LatticeSpec(obj.get("name", "custom"), types, {}, edges)
    for v in obj["vertices"]:
        if "degree" in v and spec.edge_degree(str(v["id"])) != int(v["degree"]):
            raise ValueError(f"vertex {v['id']!r}: declared degree {v['degree']} but {spec.edge_degree(str(v['id']))} edges")
    return spec


# ---------------------------------------------------------------------------
# kernels and alpha


@dataclass(frozen=True)
class KernelEntry:
    edge: EdgeClass
    a_ij: object
    a_ji: object


@dataclass(frozen=True)
class KernelTable:
    lattice: str
    entries: tuple
    provenance: str

    def unit_flow(self, spec):
        """Sum of w A_{t,v} over the edges at each vertex type; should be 1."""
        out = {}
        for t in spec.types:
            s = 0
            for k in self.entries:
                e = k.edge
                if e.i == t:
                    s = s + e.weight * k.a_ij
                if e.j == t:
                    s = s + e.weight * k.a_ji
            out[t] = s
        return out


def kernel_closed(spec):
    if not spec.has_kernels():
        raise MissingKernel(f"no closed-form kernels stored for {spec.name}")
    return KernelTable(spec.name, tuple(KernelEntry(e, e.a_ij, e.a_ji) for e in spec.edges), spec.provenance)


def _check_beta(beta):
    if beta <= 0:
        raise NonPositiveBeta(f"beta must be positive, got {beta}")


def alpha_expr(beta):
    """Symbolic arcsec(2b+1) / (2 pi sqrt(b^2 + b)); algebraic only at b = 1/2."""
    b = sympy.nsimplify(beta) if not isinstance(beta, sympy.Basic) else beta
    return sympy.asec(2 * b + 1) / (2 * sympy.pi * sympy.sqrt(b * b + b))


def alpha_closed(beta):
    beta = float(beta)
    _check_beta(beta)
    return math.acos(1 / (2 * beta + 1)) / (2 * math.pi * math.sqrt(beta * beta + beta))


def alpha_is_algebraic(beta):
    """True only at beta = 1/2, where alpha = 1/sqrt(27)."""
    _check_beta(beta)
    return Fraction(beta).limit_denominator(10**9) == Fraction(1, 2) and abs(float(beta) - 0.5) < 1e-15


def alpha_quadrature(beta, tol=1e-13):
    """alpha from the 1D integral of sqrt((1 - cos 2 pi t)/((3 + 2/b) - cos 2 pi t)).

    The integrand is rewritten as sqrt(2) sin(pi t)/sqrt(c - cos 2 pi t), which
    is analytic on [0, 1], so adaptive Gauss-Kronrod converges fast.
    """
    beta = float(beta)
    _check_beta(beta)
    if tol < 1e-15:
        raise QuadratureNotConverged(f"tolerance {tol:.3g} is below what double precision can reach")
    c = 3 + 2 / beta

    def f(t):
        return math.sqrt(2) * math.sin(math.pi * t) / math.sqrt(c - math.cos(2 * math.pi * t))

    val, err = integrate.quad(f, 0, 1, epsabs=tol / 10, epsrel=tol / 10, limit=200)
    if err > tol:
        raise QuadratureNotConverged(f"error estimate {err:.3g} exceeds {tol:.3g}")
    return val / (2 * math.sqrt(beta * beta + beta))


def alpha_torus(beta, m=400):
    """alpha = 2 * mean of (2 - w - 1/w)/P(z, w) over the torus, midpoint rule on m x m."""
    beta = float(beta)
    _check_beta(beta)
    th = 2 * np.pi * (np.arange(m) + 0.5) / m
    cz = 2 * np.cos(th)[:, None]
    cw = 2 * np.cos(th)[None, :]
    P = 16 * beta + 12 - (4 * beta + 2) * (cz + cw) - cz * cw
    return float(2 * np.mean((2 - cw) / P))


def spectral_laplacian(spec, z, w):
    """Fourier Laplacian: each edge class adds its weight on the diagonal and
    -weight * z^x w^y between its endpoint types."""
    k = {t: n for n, t in enumerate(spec.types)}
    M = np.zeros((spec.n_types, spec.n_types), dtype=complex)
    for e in spec.edges:
        wt = float(e.weight)
        x, y = e.offset
        ph = z ** x * w ** y
        a, c = k[e.i], k[e.j]
        M[a, a] += wt
        M[c, c] += wt
        M[a, c] -= wt * ph
        M[c, a] -= wt / ph
    return M


def torus_kernel(spec, i, j, offset, m=200):
    """Numeric A_{u,v} for u of type i, v of type j shifted by ``offset``,
    by midpoint-rule inversion of the Fourier Laplacian."""
    k = {t: n for n, t in enumerate(spec.types)}
    th = 2 * np.pi * (np.arange(m) + 0.5) / m
    x, y = offset
    total = 0.0
    for a in th:
        z = np.exp(1j * a)
        for b in th:
            w = np.exp(1j * b)
            Ginv = np.linalg.inv(spectral_laplacian(spec, z, w))
            total += (Ginv[k[i], k[i]] - Ginv[k[i], k[j]] / (z ** x * w ** y)).real
    return total / (m * m)


# ---------------------------------------------------------------------------
# lattice-limit table rows


def _evaluate(spec, value):
    """Substitute the closed form of alpha when beta is a number."""
    if isinstance(value, sympy.Basic) and value.has(ALPHA) and not isinstance(spec.beta, sympy.Basic):
        value = value.subs(ALPHA, alpha_expr(spec.beta))
    return value


def _tidy(x):
    if isinstance(x, sympy.Basic):
        if x.is_Rational:
            return Fraction(int(x.p), int(x.q))
        if not x.free_symbols:
            return x
        return sympy.factor(sympy.cancel(x)) if not x.has(ALPHA) else sympy.expand(x)
    return x


def lattice_edge_in_tree(spec):
    """Pr[e in T] for a weight-random edge: sum w^2 (A + A') / sum w."""
    num = sum((e.weight ** 2 * (e.a_ij + e.a_ji) for e in spec.edges), 0 * spec.edges[0].weight)
    den = sum((e.weight for e in spec.edges), 0 * spec.edges[0].weight)
    return num / den


def lattice_tau(spec):
    """tau from the dual lattice kernels: sum of w*(A A' + (A - A')^2) over sum of 1/w."""
    d = spec.dual()
    if not d.has_kernels():
        raise MissingKernel(f"dual lattice {d.name} has no stored kernels")
    num = sum(
        (e.weight * (e.a_ij * e.a_ji + (e.a_ij - e.a_ji) ** 2) for e in d.edges),
        0 * d.edges[0].weight,
    )
    den = sum((1 / e.weight for e in d.edges), 0 * d.edges[0].weight)
    return num / den


def table_row(spec):
    """Lattice-limit LoopStats (no boundary term).

    Rational rows come back as Fractions; rows involving alpha(beta) come back
    as sympy expressions in arcsec; a symbolic beta gives rational functions.
    """
    if not spec.has_kernels():
        raise MissingKernel(f"no closed-form kernels stored for {spec.name}")
    tau = _evaluate(spec, lattice_tau(spec))
    p = _evaluate(spec, lattice_edge_in_tree(spec))
    delta = spec.delta
    rho = tau + p / 2
    lam = (1 - p) / tau
    drho = delta * rho
    sigma = (drho + delta - 1) / 2
    vals = [_tidy(v) for v in (tau, rho, lam, 1 / rho, drho, sigma, p)]
    return LoopStats(
        tau=vals[0], rho=vals[1], lambda_=vals[2], mean_lerw_loop=vals[3],
        delta_rho=vals[4], sand_density=vals[5], edge_in_tree=vals[6],
    )


TABLE_COLUMNS = ["tau", "lambda", "mean_lerw_loop", "rho", "delta_rho", "sand_density"]


def table_values(stats):
    d = stats.as_dict()
    return [d[c] for c in TABLE_COLUMNS]


# ---------------------------------------------------------------------------
# finite wired patches


def _exit_point(p, q, n):
    """Where the segment p -> q first leaves the box [0, n]^2 (p inside)."""
    t = 1.0
    for k in range(2):
        d = q[k] - p[k]
        if d > 0 and q[k] > n:
            t = min(t, (n - p[k]) / d)
        elif d < 0 and q[k] < 0:
            t = min(t, -p[k] / d)
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def _as_weight(x):
    if isinstance(x, sympy.Basic):
        if x.is_Rational:
            return Fraction(int(x.p), int(x.q))
        return float(x)
    return x


def wired_patch(spec, n, with_rotation=True):
    """n x n block of fundamental domains with everything outside merged into ``SINK``.

    Vertex ids are (type, x, y).  Returns (graph, rotation); the rotation is
    None when the lattice has no drawing.
    """
    if n < 1:
        raise ValueError("patch size must be at least 1")
    cells = [(x, y) for x in range(n) for y in range(n)]
    verts = [(t, x, y) for x, y in cells for t in spec.types] + [SINK]
    edges = []
    far = {}

    def inside(x, y):
        return 0 <= x < n and 0 <= y < n

    for x, y in cells:
        for e in spec.edges:
            dx, dy = e.offset
            w = _as_weight(e.weight)
            if inside(x + dx, y + dy):
                edges.append(((e.i, x, y), (e.j, x + dx, y + dy), w))
            else:
                far[len(edges)] = ((e.i, x, y), (e.j, x + dx, y + dy))
                edges.append(((e.i, x, y), SINK, w))
            if not inside(x - dx, y - dy):
                far[len(edges)] = ((e.j, x, y), (e.i, x - dx, y - dy))
                edges.append(((e.j, x, y), SINK, w))
    g = WeightedGraph(verts, edges, sink=SINK)
    if not with_rotation or not spec.positions:
        return g, None

    def pos(v):
        t, x, y = v
        px, py = spec.positions[t]
        return (x + px, y + py)

    def head(v, eid):
        if eid in far:
            return pos(far[eid][1])
        return pos(g.edge(eid).other(v))

    rot = {}
    for v in verts[:-1]:
        x0, y0 = pos(v)
        rot[v] = sorted(g.incident[v], key=lambda eid: math.atan2(head(v, eid)[1] - y0, head(v, eid)[0] - x0))
    c = n / 2

    def crossing_angle(eid):
        inner, outer = far[eid]
        ex, ey = _exit_point(pos(inner), pos(outer), n)
        return math.atan2(ey - c, ex - c)

    # seen from the point at infinity the boundary runs clockwise
    rot[SINK] = sorted(g.incident[SINK], key=crossing_angle, reverse=True)
    return g, rot


def central_edges(spec, n):
    """One instance of every edge class near the middle of the patch."""
    c = n // 2
    out = []
    for e in spec.edges:
        dx, dy = e.offset
        out.append((e, (e.i, c, c), (e.j, c + dx, c + dy)))
    return out


@dataclass(frozen=True)
class LimitReport:
    lattice: str
    n: int
    rows: tuple  # (edge class, numeric A_ij, numeric A_ji, closed A_ij, closed A_ji)

    @property
    def deviation(self):
        return max(max(abs(r[1] - r[3]), abs(r[2] - r[4])) for r in self.rows)


def _closed_float(spec, x):
    if isinstance(x, sympy.Basic):
        if x.has(ALPHA):
            x = x.subs(ALPHA, alpha_closed(float(spec.beta)))
        return float(x)
    return float(x)


def limit_check(spec, n, tol=1e-10):
    """Central-edge kernels of the wired n x n patch against the closed forms."""
    if n > 64:
        raise ValueError("limit_check supports n <= 64")
    g, _ = wired_patch(spec, n, with_rotation=False)
    picks = central_edges(spec, n)
    sources = sorted({u for _, u, _ in picks} | {v for _, _, v in picks}, key=g.index.get)
    cols = green_columns(g, SINK, sources, backend=nm.FLOAT, tol=tol)
    rows = []
    for e, u, v in picks:
        a_uv = cols[u][u] - cols[u][v]
        a_vu = cols[v][v] - cols[v][u]
        closed_ij = _closed_float(spec, e.a_ij) if e.a_ij is not None else float("nan")
        closed_ji = _closed_float(spec, e.a_ji) if e.a_ji is not None else float("nan")
        rows.append((e, float(a_uv), float(a_vu), closed_ij, closed_ji))
    return LimitReport(spec.name, n, tuple(rows))
