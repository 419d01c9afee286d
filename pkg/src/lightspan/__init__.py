"""Light spanners for bounded-pathwidth graphs.

The pipeline reduces a graph with a path decomposition to a completed,
bounded-degree interval graph, picks a light monotone spanning tree, certifies
an acyclic charging scheme onto it, and runs the greedy spanner with the tree
forced in.  Every bound is checked against independent oracles.
"""

from .charging import (
    ChargingScheme,
    Detour,
    T2Forest,
    build_scheme,
    build_t2,
    euler_paths,
    remove_edge,
    shortcut,
    verify_scheme,
)
from .decomposition import (
    IntervalRepresentation,
    PathDecomposition,
    ReductionTrace,
    bound_degree,
    complete,
    lift_spanner,
    make_nice,
    reduce,
    to_intervals,
    validate_decomposition,
)
from .generators import GenSpec, LowerBoundInstance, gen_lowerbound, gen_random, measure_lowerbound
from .graph import EdgeSubgraph, WeightedGraph, apsp, mst, validate
from .monotone import RootedTree, is_monotone, lightest_monotone_tree, monotone_tree_recursive
from .spanner import SpannerResult, greedy_spanner, pipeline, verify_stretch

__all__ = [
    "ChargingScheme",
    "Detour",
    "EdgeSubgraph",
    "GenSpec",
    "IntervalRepresentation",
    "LowerBoundInstance",
    "PathDecomposition",
    "ReductionTrace",
    "RootedTree",
    "SpannerResult",
    "T2Forest",
    "WeightedGraph",
    "apsp",
    "bound_degree",
    "build_scheme",
    "build_t2",
    "complete",
    "euler_paths",
    "gen_lowerbound",
    "gen_random",
    "greedy_spanner",
    "is_monotone",
    "lift_spanner",
    "lightest_monotone_tree",
    "make_nice",
    "measure_lowerbound",
    "monotone_tree_recursive",
    "mst",
    "pipeline",
    "reduce",
    "remove_edge",
    "shortcut",
    "to_intervals",
    "validate",
    "validate_decomposition",
    "verify_scheme",
    "verify_stretch",
]
