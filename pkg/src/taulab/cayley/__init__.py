"""Cayley graphs of SL(2,p) quotients: construction, girth, spectrum, expansion."""

from .expansion import (
    ExpansionReport,
    MonotonicityReport,
    TooLarge,
    check_edge_monotonicity,
    expansion_exact,
    expansion_sampled,
)
from .girth import GirthReport, girth
from .graph import (
    DEFAULT_VERTEX_BUDGET,
    CapacityError,
    CayleyGraph,
    VertexSetMismatch,
    abelian_cayley_graph,
    build_graph,
    complete_graph_k4,
    cycle_graph,
    single_edge_graph,
)
from .group import ProductSL2, sl2_order
from .spectral import NonConvergence, SpectralReport, adjacency_matrix, dense_spectrum, spectral_gap

__all__ = [
    "DEFAULT_VERTEX_BUDGET",
    "CapacityError",
    "CayleyGraph",
    "ExpansionReport",
    "GirthReport",
    "MonotonicityReport",
    "NonConvergence",
    "ProductSL2",
    "SpectralReport",
    "TooLarge",
    "VertexSetMismatch",
    "abelian_cayley_graph",
    "adjacency_matrix",
    "build_graph",
    "check_edge_monotonicity",
    "complete_graph_k4",
    "cycle_graph",
    "dense_spectrum",
    "expansion_exact",
    "expansion_sampled",
    "girth",
    "single_edge_graph",
    "sl2_order",
    "spectral_gap",
]
