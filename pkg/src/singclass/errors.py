"""Exception hierarchy.

Input problems derive from :class:`InputError` (CLI exit code 1); a germ that
could not be certified finitely determined raises :class:`NotIsolated`
(exit code 2).
"""

from __future__ import annotations


class SingclassError(Exception):
    """Base class for every error raised by this package."""


class InputError(SingclassError, ValueError):
    pass


class PolySyntaxError(InputError):
    """Malformed polynomial text; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownVariable(InputError):
    pass


class DivisionByZeroInCoefficient(InputError, ZeroDivisionError):
    pass


class NonPrimeCharacteristic(InputError):
    pass


class FieldMismatch(InputError):
    pass


class NonInvertibleLinearPart(InputError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class NotInMaximalIdeal(InputError):
    pass


class OrderTooSmall(InputError):
    pass


class BoundTooSmall(InputError):
    pass


class ArityMismatch(InputError):
    pass


class NotUnivariate(InputError):
    pass


class TooLarge(InputError):
    pass


class NotIsolated(SingclassError):
    """Finiteness could not be certified up to ``bound``."""

    def __init__(self, message: str, bound: int):
        self.bound = bound
        super().__init__(message)


class QNotFoundUpTo(NotIsolated):
    pass
