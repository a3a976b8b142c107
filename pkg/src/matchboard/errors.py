"""Exception hierarchy shared by all matchboard modules."""

__all__ = [
    "MatchboardError",
    "InvalidObjectError",
    "ParseError",
    "PatternViolationError",
    "ResourceCapError",
    "SeriesError",
    "DivisibilityError",
]


class MatchboardError(Exception):
    """Base class for all errors raised by this package."""


class InvalidObjectError(MatchboardError):
    """A combinatorial object violates its structural invariants."""


class ParseError(MatchboardError):
    """A text encoding could not be parsed."""


class PatternViolationError(MatchboardError):
    """An input fails a pattern-avoidance precondition.

    ``vertices`` names a witnessing vertex set when one is available.
    """

    def __init__(self, message, vertices=None):
        super().__init__(message)
        self.vertices = tuple(vertices) if vertices is not None else None


class ResourceCapError(MatchboardError):
    """A requested enumeration exceeds the configured size caps."""


class SeriesError(MatchboardError):
    """A power-series operation violated one of its preconditions."""


class DivisibilityError(SeriesError):
    """An exact division in the series layer left a remainder."""
