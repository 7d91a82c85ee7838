"""Shared exception types."""


class InvariantViolation(AssertionError):
    """An identity that the underlying theory guarantees failed to hold.

    Raised when two independent computations of the same quantity disagree,
    or when a structurally impossible configuration is encountered.  Seeing
    this exception always indicates a bug, never bad user input.
    """


class TruncationError(ValueError):
    """A series coefficient beyond the truncation degree was requested.

    Truncated series never silently return zero past their horizon; asking
    for such a coefficient is a usage error and fails loudly.
    """
