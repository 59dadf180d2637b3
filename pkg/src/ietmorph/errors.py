"""Exception hierarchy shared by every module.

All domain failures derive from :class:`IetMorphError` so the CLI can map
them onto a single exit code.
"""

from __future__ import annotations


class IetMorphError(ValueError):
    """Base class for domain errors."""


class IncompatibleField(IetMorphError):
    pass


class DivByZero(IetMorphError, ZeroDivisionError):
    pass


class ParseError(IetMorphError):
    pass


class WindowTooShort(IetMorphError):
    pass


class AlphabetMismatch(IetMorphError):
    pass


class EmptyWord(IetMorphError):
    pass


class IncompleteLanguage(IetMorphError):
    pass


class OutOfDomain(IetMorphError):
    pass


class ExactnessRequired(IetMorphError):
    pass


class NotAFixedPointSeed(IetMorphError):
    pass


class NoFixedPointFound(IetMorphError):
    pass


class NotPrimitive(IetMorphError):
    pass


class DegenerateTransport(IetMorphError):
    pass


class TransportOutOfCone(IetMorphError):
    pass


class BoundTooLarge(IetMorphError):
    pass


class NotInClass(IetMorphError):
    pass


class ConversionBug(IetMorphError):
    pass


class NotAUnit(IetMorphError):
    pass


class SingularRenorm(IetMorphError):
    pass


class HypothesisFailed(IetMorphError):
    pass


class FieldMismatch(IetMorphError):
    pass
