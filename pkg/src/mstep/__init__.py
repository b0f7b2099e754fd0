"""Limits of m-step competition graphs of multipartite tournaments.

Two independent routes to the limit of the competition-graph sequence of a
sink-free multipartite tournament: iterate the bit-packed matrix sequence
A^m (A^T)^m until its eventually-periodic tail is certified (the oracle in
:mod:`mstep.boolmat`), or assemble the limit directly from the strong
component structure (:mod:`mstep.limits`).  ``verify_against_oracle``
cross-checks the two; the ``mstep`` CLI wraps analysis, generation,
verification campaigns and benchmarks.
"""

from .boolmat import (
    BoolMatrix,
    CompetitionProfile,
    ParseError,
    PowerCycle,
    ResourceLimitError,
    bm_mul,
    bm_pow,
    bm_transpose,
    competition_matrix,
    competition_profile,
    naive_mul,
    power_cycle,
    zero_diagonal,
)
from .digraph import (
    ComponentStructure,
    Tournament,
    ValidationError,
    infer_partition,
    ordered_components,
    sinks,
    tournament_from_arcs,
    validate,
)
from .gen import (
    GenerationError,
    GenSpec,
    example_tripartite,
    make_component_chain,
    make_unusual_pair,
    random_constrained,
    random_tournament,
)
from .imprimitivity import (
    Alignment,
    AlignmentError,
    ImprimitivityData,
    align_to_partition,
    is_unusual,
    kappa_and_sets,
    partite_related,
)
from .limits import (
    BlockForm,
    ConsistencyError,
    LimitReport,
    LimitTrace,
    SinksError,
    Verdict,
    assemble_bipartite_type,
    assemble_kappa3,
    block_form,
    construct_limit,
    verify_against_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "AlignmentError",
    "BlockForm",
    "BoolMatrix",
    "CompetitionProfile",
    "ComponentStructure",
    "ConsistencyError",
    "GenSpec",
    "GenerationError",
    "ImprimitivityData",
    "LimitReport",
    "LimitTrace",
    "ParseError",
    "PowerCycle",
    "ResourceLimitError",
    "SinksError",
    "Tournament",
    "ValidationError",
    "Verdict",
    "align_to_partition",
    "assemble_bipartite_type",
    "assemble_kappa3",
    "block_form",
    "bm_mul",
    "bm_pow",
    "bm_transpose",
    "competition_matrix",
    "competition_profile",
    "construct_limit",
    "example_tripartite",
    "infer_partition",
    "is_unusual",
    "kappa_and_sets",
    "make_component_chain",
    "make_unusual_pair",
    "naive_mul",
    "ordered_components",
    "partite_related",
    "power_cycle",
    "random_constrained",
    "random_tournament",
    "sinks",
    "tournament_from_arcs",
    "validate",
    "verify_against_oracle",
    "zero_diagonal",
]
