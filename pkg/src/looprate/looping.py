"""Looping rates of loop-erased random walk and the quantities derived from them.

``tau`` is the rate of loops of length >= 3, computed from two-component
forests of the planar dual; ``rho`` adds half the probability that a
weight-random edge lies in a random spanning tree.
"""
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import numerics as nm
from .errors import NoUnicycle
from .graph import dual
from .kernels import kernel_for


@dataclass(frozen=True)
class LoopStats:
    tau: object
    rho: object
    lambda_: object
    mean_lerw_loop: object
    delta_rho: object
    sand_density: object
    edge_in_tree: object

    def as_dict(self):
        d = asdict(self)
        lam = d.pop("lambda_")
        return {"tau": d.pop("tau"), "rho": d.pop("rho"), "lambda": lam, **d}


def dual_edge_term(w, a, b):
    """w [A A' + (A - A')^2] for one dual edge."""
    return w * (a * b + (a - b) ** 2)


def tau_exact(graph, rotation, dual_sink=0, backend=nm.EXACT):
    """Unicycle / (tree x edge) ratio from the potential kernel of the dual."""
    d = dual(graph, rotation, sink_face=dual_sink)
    A = kernel_for(d.graph, d.sink, backend)
    num = Fraction(0)
    den = Fraction(0)
    for e in d.graph.edges:
        num += dual_edge_term(e.w, A(e.u, e.v), A(e.v, e.u))
        den += 1 / e.w
    return num / den


def edge_in_tree(graph, kernel=None, backend=nm.EXACT):
    """Pr[e in T] for a weight-random edge e and weighted-random tree T.

    Equal weights reduce this to (|V| - 1) / |E|; otherwise the weighted
    average of w (A_uv + A_vu) is taken.
    """
    if graph.is_unweighted():
        return Fraction(graph.n - 1, graph.m)
    A = kernel if kernel is not None else kernel_for(graph, backend=backend)
    num = sum((e.w * e.w * (A(e.u, e.v) + A(e.v, e.u)) for e in graph.edges), Fraction(0))
    return num / graph.total_weight()


def rho_exact(graph, rotation, backend=nm.EXACT):
    return tau_exact(graph, rotation, backend=backend) + edge_in_tree(graph, backend=backend) / 2


def lambda_mean_loop(tau, rho):
    """Mean cycle length of a weight-random spanning unicycle."""
    if tau == 0:
        raise NoUnicycle("tau is zero: the graph has no unicycles")
    return (1 - 2 * (rho - tau)) / tau


def delta_rho(graph, rho):
    """Mean weighted number of neighbouring ancestors, delta * rho."""
    return graph.mean_degree() * rho


def density_formula(delta, rho, sink_degree=None, n=None):
    """(delta rho + delta - 1)/2, minus (delta_s - 1/2)/|V| on finite graphs."""
    value = (delta * rho + delta - 1) / 2
    if sink_degree is not None:
        value -= (sink_degree - Fraction(1, 2)) / n
    return value


def sand_density(graph, rotation, s=None, rho=None):
    """Mean sand per vertex of a uniform recurrent sandpile with sink ``s``."""
    s = graph.default_sink() if s is None else s
    if rho is None:
        rho = rho_exact(graph, rotation)
    return density_formula(graph.mean_degree(), rho, graph.degree(s), graph.n)


def loop_stats(graph, rotation, s=None, backend=nm.EXACT):
    tau = tau_exact(graph, rotation, backend=backend)
    p = edge_in_tree(graph, backend=backend)
    rho = tau + p / 2
    return LoopStats(
        tau=tau,
        rho=rho,
        lambda_=lambda_mean_loop(tau, rho),
        mean_lerw_loop=1 / rho,
        delta_rho=delta_rho(graph, rho),
        sand_density=sand_density(graph, rotation, s, rho),
        edge_in_tree=p,
    )
