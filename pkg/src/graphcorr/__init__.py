"""Graph correspondences over c0(V) and the graphs they come from."""

from .complexla import (
    TOL_RANK,
    TOL_VAL,
    HermitianForm,
    form_orthonormalize,
    hermitian_rank,
    invert,
    orthonormal_extension,
)
from .correspondence import (
    Correspondence,
    CorrespondenceMorphism,
    change_of_generators,
    compose_morphisms,
    correspondences_equal,
    dimension_matrix,
    generator_change_morphism,
    graph_correspondence,
    inner_product,
    is_full,
    is_left_faithful,
    module_action,
    sigma_correspondence,
    validate_correspondence,
    validate_correspondence_morphism,
)
from .functor import (
    CharacterizationResult,
    EssentialFullnessSquare,
    OrthoBasisFamily,
    build_graph,
    check_reflects_isomorphism,
    decompose,
    essential_fullness,
    gamma_image_preimage,
    gamma_on_morphism,
    recover_graph_isomorphism,
)
from .graph import (
    DimensionMatrix,
    DirectedGraph,
    Edge,
    GraphMorphism,
    adjacency_matrix,
    canonical_pairing_isomorphism,
    functional_graph,
    is_vertex_fixing_isomorphism,
    sinks_and_sources,
    to_dot,
    validate_graph_morphism,
)
from .reports import Report, Violation

__version__ = "0.1.0"
