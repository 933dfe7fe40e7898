"""Hop-count shortest paths in disk graphs.

Builds the additively weighted Voronoi diagram of the disks, its dual
adjacency, and a logarithmic point-location structure, then runs the
layered search that answers single-source hop distances in near
O(n log n) time.  A brute-force oracle and instance generators back every
piece with independent verification.
"""

from ._backend import backend_name
from .geometry import (
    BisectorArc,
    Point,
    Site,
    apollonius_vertex,
    bisector,
    compare_weighted,
    domination_predicate,
    edge_predicate,
    weighted_distance,
)
from .diagram import ApolloniusDiagram, DualGraph, build_diagram, extract_dual
from .locator import Locator, build_locator, nearest_site
from .sssp import (
    UNREACHED,
    LayerResult,
    compute_layers,
    handle_dominated_source,
    patch_dominated,
    verify_layer_path,
)
from .errors import DegenerateInstanceError, InputFormatError

__version__ = "0.1.0"

__all__ = [
    "ApolloniusDiagram", "BisectorArc", "DegenerateInstanceError", "DualGraph",
    "InputFormatError", "LayerResult", "Locator", "Point", "Site", "UNREACHED",
    "apollonius_vertex", "backend_name", "bisector", "build_diagram",
    "build_locator", "compare_weighted", "compute_layers",
    "domination_predicate", "edge_predicate", "extract_dual",
    "handle_dominated_source", "nearest_site", "patch_dominated",
    "verify_layer_path", "weighted_distance",
]
