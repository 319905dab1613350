"""Exception hierarchy for the algebra engine."""

from __future__ import annotations

from typing import Any


class NovikovError(Exception):
    """Base class for every domain error raised by the engine."""


class DomainError(NovikovError):
    """An operation was applied outside its domain (e.g. inverting zero)."""


class DimensionMismatchError(NovikovError):
    def __init__(self, expected: int, actual: int, what: str = "value") -> None:
        super().__init__(f"dimension mismatch for {what}: expected {expected}, got {actual}")
        self.expected = expected
        self.actual = actual


class AxisOutOfRangeError(NovikovError):
    def __init__(self, axis: int, dim: int) -> None:
        super().__init__(f"axis {axis} outside 1..{dim}")
        self.axis = axis
        self.dim = dim


class ZeroNormalError(NovikovError):
    pass


class EmptyPolytopeError(NovikovError):
    pass


class UnboundedPolytopeError(NovikovError):
    pass


class InvalidCoverError(NovikovError):
    pass


class RefinementFailure(NovikovError):
    def __init__(self, message: str, cell: Any = None) -> None:
        super().__init__(message)
        self.cell = cell


class NotASubsetError(NovikovError):
    pass


class NonpositiveDeltaError(NovikovError):
    pass


class NotSeparatedError(NovikovError):
    pass


class NotACoverError(NovikovError):
    def __init__(self, message: str, point: Any = None) -> None:
        super().__init__(message)
        self.point = point


class NotACocycleError(NovikovError):
    def __init__(self, message: str, face: Any = None) -> None:
        super().__init__(message)
        self.face = face


class NotLaurentCoverError(NovikovError):
    pass


class PrecisionLossError(NovikovError):
    """A reconstructed value no longer restricts to its input at the stated precision."""


class PreconditionViolated(NovikovError):
    pass


class NotComparableError(NovikovError):
    def __init__(self, source: str, target: str) -> None:
        super().__init__(f"no morphism {source} -> {target}: labels are not comparable")
        self.source = source
        self.target = target


class CocycleViolationError(NovikovError):
    def __init__(self, message: str, chain: tuple[str, ...] = ()) -> None:
        super().__init__(message)
        self.chain = chain


class CoverAssumptionViolated(NovikovError):
    pass


class NotCompatibleError(NovikovError):
    def __init__(self, message: str, pair: tuple[str, ...] = ()) -> None:
        super().__init__(message)
        self.pair = pair
