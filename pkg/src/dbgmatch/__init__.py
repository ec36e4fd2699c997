"""Pattern matching on vertex-labeled de Bruijn graphs, plus executable hardness reductions."""

from dbgmatch.errors import (
    AlphabetRangeError,
    AmbiguousImplicitLabel,
    CapExceeded,
    DbgError,
    InvariantViolation,
    NoIncomingWalk,
    NotPowerOfTwo,
    ParseError,
    UnknownVertex,
)
from dbgmatch.graph import (
    DeBruijnGraph,
    LabeledDigraph,
    ValidationReport,
    Violation,
    compute_implicit_labels,
    full_de_bruijn,
    validate_de_bruijn,
)
from dbgmatch.matchers import (
    INF,
    MatchResult,
    constrained_pattern_dp,
    match_exact,
    min_graph_substitutions,
    min_pattern_substitutions,
)

from dbgmatch.reduce_ham import build_npc_instance, check_npc_structure
from dbgmatch.reduce_ov import build_seth_instance, check_ov_optimality_probes

__all__ = [
    "AlphabetRangeError",
    "AmbiguousImplicitLabel",
    "CapExceeded",
    "DbgError",
    "DeBruijnGraph",
    "INF",
    "InvariantViolation",
    "LabeledDigraph",
    "MatchResult",
    "NoIncomingWalk",
    "NotPowerOfTwo",
    "ParseError",
    "UnknownVertex",
    "ValidationReport",
    "Violation",
    "build_npc_instance",
    "build_seth_instance",
    "check_npc_structure",
    "check_ov_optimality_probes",
    "compute_implicit_labels",
    "constrained_pattern_dp",
    "full_de_bruijn",
    "match_exact",
    "min_graph_substitutions",
    "min_pattern_substitutions",
    "validate_de_bruijn",
]

__version__ = "0.1.0"
