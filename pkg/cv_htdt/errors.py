"""Exceptions raised by cv_htdt."""

from typing import Optional, Sequence, Union

__all__ = [
    "HTDTError",
    "ValidationError",
    "DimensionMismatchError",
    "PhysicalityError",
]


class HTDTError(Exception):
    """Root of every error raised by this package."""


class ValidationError(HTDTError, ValueError):
    """A precondition on an argument does not hold.

    constraint -- the violated precondition, stated as a formula (e.g. "d >= max{g/x, 1}").
    """

    def __init__(self, message: str, constraint: Optional[str] = None):
        """Initialize ValidationError objects."""
        if constraint is not None:
            message = f"{message} (requires {constraint})"
        super().__init__(message)
        self.constraint = constraint


class DimensionMismatchError(ValidationError):
    """Matrix or vector sizes do not line up."""

    def __init__(self, what: str, expected: Union[int, Sequence[int]], actual: Union[int, Sequence[int]]):
        """Initialize DimensionMismatchError objects."""
        super().__init__(f"{what}: expected size {tuple(_as_shape(expected))}, got {tuple(_as_shape(actual))}")
        self.expected = expected
        self.actual = actual


class PhysicalityError(ValidationError):
    """A state, map or resource violates an uncertainty or complete-positivity bound."""


def _as_shape(size: Union[int, Sequence[int]]) -> Sequence[int]:
    if isinstance(size, int):
        return (size,)
    return size
