"""Temporal-graph connectivity augmentation toolkit.

Decide and optimize which temporal edges to add, out of a candidate set,
so that a temporal graph meets a connectivity requirement (full
connectivity, a designated source, or explicit pair demands) under strict
or non-strict journey semantics.  Includes the binary-matrix reformulation
of the lifespan-2 case, the quadratic algorithm for the one-extra-step
case, a temporal-expansion solver for pair demands, and generators for
the hardness gadgets used as correctness oracles.
"""

from .augmentation import (
    COST_EDGE,
    COST_GROUP,
    All,
    AugmentationProblem,
    Infeasible,
    Pairs,
    Requirement,
    Solution,
    Source,
    build_certificate,
    component_count_bound_check,
    solve_exact,
    solve_one_plus_one,
    spanner_via_tca,
    unrestricted_candidates,
    verify_solution,
)
from .octo import (
    BinaryMatrix,
    MergeStep,
    OctoResult,
    apply_sequence,
    component_intersection_matrix,
    matrix_to_graph,
    or_combine,
    sequence_to_edges,
    solve_octo,
)
from .steiner_expansion import (
    ExpansionGraph,
    ExpansionNode,
    TGSteinerInstance,
    build_expansion,
    journey_to_path,
    min_weight_connection,
    path_to_journey,
    solve_tpca_via_expansion,
)
from .temporal_graph import (
    NON_STRICT,
    STRICT,
    InvalidCandidateError,
    Journey,
    ParseError,
    SnapshotComponents,
    TemporalEdge,
    TemporalGraph,
    find_journey,
    format_tg,
    parse_tg,
    validate_journey,
)

__version__ = "0.1.0"

__all__ = [
    "All",
    "AugmentationProblem",
    "BinaryMatrix",
    "COST_EDGE",
    "COST_GROUP",
    "ExpansionGraph",
    "ExpansionNode",
    "Infeasible",
    "InvalidCandidateError",
    "Journey",
    "MergeStep",
    "NON_STRICT",
    "OctoResult",
    "Pairs",
    "ParseError",
    "Requirement",
    "STRICT",
    "SnapshotComponents",
    "Solution",
    "Source",
    "TGSteinerInstance",
    "TemporalEdge",
    "TemporalGraph",
    "apply_sequence",
    "build_certificate",
    "build_expansion",
    "component_count_bound_check",
    "component_intersection_matrix",
    "find_journey",
    "format_tg",
    "journey_to_path",
    "matrix_to_graph",
    "min_weight_connection",
    "or_combine",
    "parse_tg",
    "path_to_journey",
    "sequence_to_edges",
    "solve_exact",
    "solve_octo",
    "solve_one_plus_one",
    "solve_tpca_via_expansion",
    "spanner_via_tca",
    "unrestricted_candidates",
    "validate_journey",
    "verify_solution",
]
