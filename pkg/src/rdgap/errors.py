"""Exception types shared across the package."""


class RdgapError(Exception):
    """Base class for all package errors."""


class ParseError(RdgapError, ValueError):
    """Malformed word, numeral, star system, scheme text, or JSON payload."""


class DomainError(RdgapError, ValueError):
    """Argument outside the domain of an operation (x not in [0,1], eps <= 0, ...)."""


class ConstructionError(RdgapError, ValueError):
    """Input violates a structural invariant (breakpoints not increasing, a >= b, ...)."""


class CoveringError(RdgapError):
    """Covering budget or slot discipline violated."""


class NeedsMoreStages(RdgapError):
    """Requested h-index exceeds the intervals available in the covering prefix."""

    def __init__(self, requested: int, available: int):
        super().__init__(f"h_{requested} requested but only {available} intervals built")
        self.requested = requested
        self.available = available


class VerificationError(RdgapError):
    """An exact verification chain failed; message carries both sides."""
