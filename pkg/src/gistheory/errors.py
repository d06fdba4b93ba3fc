"""Exception hierarchy shared by every module."""

from __future__ import annotations


class GisError(Exception):
    """Base class for all library errors."""


class DomainError(GisError, ValueError):
    """Bad input value: modulus mismatch, arity mismatch, malformed syntax."""


class MembershipError(DomainError):
    """A point is not an element of the carrier it was used with."""


class DegenerateInputError(DomainError):
    """Segment violates a hypothesis such as the tritone condition."""


class DegenerateSymmetryError(DegenerateInputError):
    """Segment is both a T-form and an I-form of the seed."""


class PreconditionError(GisError):
    """A structural precondition (simple transitivity, duality, ...) fails."""


class MorphismViolation(GisError):
    """The defining square of a morphism fails at a concrete pair."""

    def __init__(self, s, t, lhs, rhs, message: str = "morphism square does not commute"):
        self.s = s
        self.t = t
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"{message} at ({s}, {t}): {lhs} != {rhs}")


class LibraryBug(GisError, AssertionError):
    """An internal consistency check that should be a theorem has failed."""


class NetworkError(DomainError):
    """A network document could not be parsed or resolved.

    ``locus`` names the offending field, e.g. ``edges[3].op``.
    """

    def __init__(self, message: str, locus: str | None = None):
        self.locus = locus
        super().__init__(f"{locus}: {message}" if locus else message)
