"""Divisor theory on finite graphs.

Chip-firing style divisor classes (Laplacian, reduced representatives,
complete linear systems, Baker-Norine rank), graph symmetry (automorphism
groups, quotients, harmonic actions), and a certified Galois-point
decision procedure, with a CLI front end and an exhaustive small-graph
corpus runner.
"""

from .corpus import CorpusResult, GraphRecord, enumerate_corpus
from .divisors import (
    DEFAULT_ENUMERATION_CAP,
    Divisor,
    VertexFunction,
    canonical_divisor,
    is_q_reduced,
    laplacian_apply,
    linear_system,
    linearly_equivalent,
    q_reduce,
    q_reduce_with_witness,
    rank,
    set_strict_validation,
)
from .errors import (
    DisconnectedError,
    DuplicateEdgeError,
    DuplicateVertexError,
    EnumerationCapExceededError,
    GraphDivisorsError,
    GraphMismatchError,
    InvalidMorphismError,
    LoopEdgeError,
    MissingVertexValueError,
    NotTwoEdgeConnectedError,
    ParameterOutOfRangeError,
    RankPreconditionError,
    SizeCapExceededError,
    UnknownEndpointError,
    UnknownVertexError,
)
from .galois import (
    ClassificationReport,
    Cond1Fail,
    Cond2Fail,
    GaloisCertificate,
    NoQualifyingSubgroup,
    RankNotTwo,
    RiemannRochCheck,
    SmoothnessCheck,
    TheoremCheck,
    audit_certificate,
    check_smoothness,
    classify_galois_points,
    fixed_members,
    is_galois_point,
    riemann_roch_check,
    verify_theorem,
)
from .graphs import (
    Graph,
    GraphFamily,
    build_graph,
    generate,
    genus,
    is_two_edge_connected,
    parse_family,
)
from .symmetry import (
    Automorphism,
    EdgeClass,
    GraphMorphism,
    QuotientGraph,
    Subgroup,
    acts_harmonically,
    all_subgroups,
    apply_to_divisor,
    automorphism_group,
    is_harmonic_morphism,
    orbit,
    quotient_graph,
    stabilizer,
    subgroups_of_order,
)

__version__ = "0.1.0"

__all__ = [
    "Automorphism",
    "ClassificationReport",
    "Cond1Fail",
    "Cond2Fail",
    "CorpusResult",
    "DEFAULT_ENUMERATION_CAP",
    "DisconnectedError",
    "Divisor",
    "DuplicateEdgeError",
    "DuplicateVertexError",
    "EdgeClass",
    "EnumerationCapExceededError",
    "GaloisCertificate",
    "Graph",
    "GraphDivisorsError",
    "GraphFamily",
    "GraphMismatchError",
    "GraphMorphism",
    "GraphRecord",
    "InvalidMorphismError",
    "LoopEdgeError",
    "MissingVertexValueError",
    "NoQualifyingSubgroup",
    "NotTwoEdgeConnectedError",
    "ParameterOutOfRangeError",
    "QuotientGraph",
    "RankNotTwo",
    "RankPreconditionError",
    "RiemannRochCheck",
    "SizeCapExceededError",
    "SmoothnessCheck",
    "Subgroup",
    "TheoremCheck",
    "UnknownEndpointError",
    "UnknownVertexError",
    "VertexFunction",
    "acts_harmonically",
    "all_subgroups",
    "apply_to_divisor",
    "audit_certificate",
    "automorphism_group",
    "build_graph",
    "canonical_divisor",
    "check_smoothness",
    "classify_galois_points",
    "enumerate_corpus",
    "fixed_members",
    "generate",
    "genus",
    "is_galois_point",
    "is_harmonic_morphism",
    "is_q_reduced",
    "is_two_edge_connected",
    "laplacian_apply",
    "linear_system",
    "linearly_equivalent",
    "orbit",
    "parse_family",
    "q_reduce",
    "q_reduce_with_witness",
    "quotient_graph",
    "rank",
    "riemann_roch_check",
    "set_strict_validation",
    "stabilizer",
    "subgroups_of_order",
    "verify_theorem",
]
