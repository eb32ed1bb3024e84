"""Invariants of negative definite plumbing trees."""

from .ellseq import nn_elliptic_sequence
from .extensions import build_extension, extend_dual_exponent, is_good_extension
from .graph import PlumbingGraph, induced_subgraph, parse_graph
from .lattice import build_context
from .laufer import classify, generalized_laufer, minimal_cycle
from .poincare import canonical_polynomial, reduce_polynomial, sw0_norm

__all__ = [
    "PlumbingGraph",
    "build_context",
    "build_extension",
    "canonical_polynomial",
    "classify",
    "extend_dual_exponent",
    "generalized_laufer",
    "induced_subgraph",
    "is_good_extension",
    "minimal_cycle",
    "nn_elliptic_sequence",
    "parse_graph",
    "reduce_polynomial",
    "sw0_norm",
]
