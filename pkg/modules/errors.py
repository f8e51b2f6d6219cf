"""
Exception hierarchy shared by every module.
The CLI maps these onto exit codes (see modules.cli).
"""
from typing import Optional


class HypercombError(Exception):
    """Base class for all domain errors raised by the toolkit."""


class SpecSyntaxError(HypercombError, ValueError):
    """A set spec, coefficient list or coloring file could not be parsed."""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class InvalidInputError(HypercombError, ValueError):
    """Input is well-formed but outside the operation's domain."""


class PreconditionError(HypercombError, ValueError):
    """A documented precondition does not hold for the given arguments."""


class UnsupportedSetError(HypercombError):
    """The operation is not defined for this IntegerSet representation."""


class EmptyWindowError(HypercombError):
    """The window has no members where at least one is required."""


class VerificationError(HypercombError):
    """A computed object failed its own postcondition check."""


class ResourceLimitExceeded(HypercombError):
    """A configured limit (window size, search nodes, time, states) was hit."""


class WindowTooLargeError(ResourceLimitExceeded):
    """Requested window exceeds Limits.max_window."""
