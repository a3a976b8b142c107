"""Exact-arithmetic workbench for pattern-avoiding matchings, set
partitions, and full rook placements on Ferrers boards."""

from .errors import (
    DivisibilityError,
    InvalidObjectError,
    MatchboardError,
    ParseError,
    PatternViolationError,
    ResourceCapError,
    SeriesError,
)
from .model import (
    DyckPath,
    FerrersBoard,
    LabeledDyckPath,
    Matching,
    PathStats,
    RookPlacement,
    SetPartition,
    kappa,
    kappa_inv,
    partition_to_matching,
    statistics,
)
from .patterns import Pattern, parse_pattern_set

__version__ = "0.1.0"

__all__ = [
    "DivisibilityError",
    "InvalidObjectError",
    "MatchboardError",
    "ParseError",
    "PatternViolationError",
    "ResourceCapError",
    "SeriesError",
    "DyckPath",
    "FerrersBoard",
    "LabeledDyckPath",
    "Matching",
    "PathStats",
    "RookPlacement",
    "SetPartition",
    "kappa",
    "kappa_inv",
    "partition_to_matching",
    "statistics",
    "Pattern",
    "parse_pattern_set",
    "__version__",
]
