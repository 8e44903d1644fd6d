"""Graph canonization by individualization-refinement with pluggable visitors."""

from .core import RunReport, Visitor, VisitorSuite, canonicalize
from .graph import AttributedGraph, apply_permutation, build_graph, compare_representation
from .partition import OrderedPartition
from .permgroup import Permutation

__all__ = [
    "AttributedGraph",
    "OrderedPartition",
    "Permutation",
    "RunReport",
    "Visitor",
    "VisitorSuite",
    "apply_permutation",
    "build_graph",
    "canonicalize",
    "compare_representation",
]
