"""Exception hierarchy shared by every module."""

from __future__ import annotations


class SkewCliffordError(Exception):
    """Base class for all library errors."""


class InputError(SkewCliffordError, ValueError):
    """Malformed or inconsistent user input.

    ``pointer`` is a JSON pointer into the input document when the error
    originates from parsing one.
    """

    def __init__(self, message: str, pointer: str | None = None):
        super().__init__(message)
        self.pointer = pointer

    def __str__(self) -> str:
        msg = super().__str__()
        return f"{msg} (at {self.pointer})" if self.pointer else msg


class NonPrime(InputError):
    pass


class EvenCharacteristic(InputError):
    pass


class ReducibleMinPoly(InputError):
    pass


class FieldMismatch(SkewCliffordError, TypeError):
    pass


class DivisionByZero(SkewCliffordError, ZeroDivisionError):
    pass


class MuConstraintViolation(InputError):
    pass


class NotMuSymmetric(InputError):
    pass


class SchemaError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class NonHomogeneous(InputError):
    pass


class DependentMatrices(SkewCliffordError):
    """The matrices M_1..M_n are linearly dependent."""


class BudgetExceeded(SkewCliffordError):
    pass


class TheoremViolation(SkewCliffordError, AssertionError):
    """A quadratic form produced more than two distinct factorizations.

    ``factorizations`` holds the complete set that was found.
    """

    def __init__(self, message: str, factorizations=None):
        super().__init__(message)
        self.factorizations = factorizations


class HypothesisWarning(UserWarning):
    """Counting was run on a system whose regularity hypotheses failed."""
