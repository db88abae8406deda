"""Box-arrangement conflict graphs: constructions, exact colouring and certificates."""

from .conflict import ConflictGraph, build_graph, degeneracy, max_clique
from .geometry import Arrangement, AxisRemap, Box, Interval, SegmentProbe, contact, validate
from .solver import chromatic_number, k_colorable, verify_coloring

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "AxisRemap",
    "Box",
    "ConflictGraph",
    "Interval",
    "SegmentProbe",
    "build_graph",
    "chromatic_number",
    "contact",
    "degeneracy",
    "k_colorable",
    "max_clique",
    "validate",
    "verify_coloring",
]
