"""Looping rates and sandpile densities of planar graphs.

Exact values come from potential kernels and planar duality; brute-force
enumerators and Monte Carlo samplers are included to check them.
"""
from .errors import LoopRateError
from .forests import f2_minor, f2_positive, fk, level_variance, unicycles_via_dual
from .graph import WeightedGraph, dual, faces, graph_from_json, load_graph
from .kernels import green, kernel_for, tree_weight
from .looping import LoopStats, loop_stats

__version__ = "0.1.0"

__all__ = [
    "LoopRateError",
    "LoopStats",
    "WeightedGraph",
    "dual",
    "f2_minor",
    "f2_positive",
    "faces",
    "fk",
    "graph_from_json",
    "green",
    "kernel_for",
    "level_variance",
    "load_graph",
    "loop_stats",
    "tree_weight",
    "unicycles_via_dual",
]
