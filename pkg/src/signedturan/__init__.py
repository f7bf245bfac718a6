"""Spectral and extremal analysis of signed graphs.

The top level re-exports the everyday API; the submodules hold the rest.
"""

from .constructions import complete, gamma_construction, turan_graph, unbalanced_complete
from .graph import (
    GraphError,
    SignedGraph,
    adjacency_matrix,
    are_switching_isomorphic,
    canonical_switch,
    negate,
    new_graph,
    switch,
    underlying,
)
from .invariants import (
    balanced_clique_number,
    check_radius_equals_index,
    clique_number,
    find_unbalanced_complete,
    is_balanced,
    is_c3_minus_free,
    negative_girth,
)
from .perturb import Kind, Perturbation, apply, equality_diagnosis, nonneg_switch
from .search import (
    c3_reports,
    enumerate_switching_classes,
    max_edges_report,
    max_index_report,
    verify_all,
)
from .sg1 import SG1FormatError
from .spectra import (
    IntPolynomial,
    Partition,
    Spectrum,
    char_poly,
    eigenvalues,
    gamma_cubic,
    index,
    largest_real_root,
    leading_eigenvector,
    quotient_matrix,
    spectral_radius,
    spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "GraphError",
    "SignedGraph",
    "adjacency_matrix",
    "are_switching_isomorphic",
    "canonical_switch",
    "negate",
    "new_graph",
    "switch",
    "underlying",
    "balanced_clique_number",
    "check_radius_equals_index",
    "clique_number",
    "find_unbalanced_complete",
    "is_balanced",
    "is_c3_minus_free",
    "negative_girth",
    "IntPolynomial",
    "Partition",
    "Spectrum",
    "char_poly",
    "eigenvalues",
    "gamma_cubic",
    "index",
    "largest_real_root",
    "leading_eigenvector",
    "quotient_matrix",
    "spectral_radius",
    "spectrum",
    "complete",
    "gamma_construction",
    "turan_graph",
    "unbalanced_complete",
    "Kind",
    "Perturbation",
    "apply",
    "equality_diagnosis",
    "nonneg_switch",
    "c3_reports",
    "enumerate_switching_classes",
    "max_edges_report",
    "max_index_report",
    "verify_all",
    "SG1FormatError",
]
