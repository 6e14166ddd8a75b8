"""Finite-group construction, embedding search, and result verification."""

from .errors import (
    AutBudgetExceeded,
    CentralIdentificationError,
    EngineError,
    IncompleteCertificates,
    IncompleteSeedSet,
    InvalidAction,
    NotNormal,
    OrderLimitExceeded,
    OutOfRange,
    ParseError,
    SearchBudgetExceeded,
    SubgroupLimitExceeded,
    TierLimitExceeded,
    UnknownGenerator,
    UnknownLabel,
)
from .expressions import parse_expr
from .groups import (
    Subgroup,
    TableGroup,
    TwistedGroup,
    check_table,
    construct,
    expr_order,
    quotient_group,
)
from .morphisms import (
    Fingerprint,
    Morphism,
    automorphisms,
    find_embedding,
    is_isomorphic,
    search_monomorphisms,
)

__version__ = "0.1.0"

__all__ = [
    "AutBudgetExceeded",
    "CentralIdentificationError",
    "EngineError",
    "Fingerprint",
    "IncompleteCertificates",
    "IncompleteSeedSet",
    "InvalidAction",
    "Morphism",
    "NotNormal",
    "OrderLimitExceeded",
    "OutOfRange",
    "ParseError",
    "SearchBudgetExceeded",
    "SubgroupLimitExceeded",
    "Subgroup",
    "TableGroup",
    "TierLimitExceeded",
    "TwistedGroup",
    "UnknownGenerator",
    "UnknownLabel",
    "automorphisms",
    "check_table",
    "construct",
    "expr_order",
    "find_embedding",
    "is_isomorphic",
    "parse_expr",
    "quotient_group",
    "search_monomorphisms",
    "__version__",
]
