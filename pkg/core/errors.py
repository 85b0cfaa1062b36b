"""
Exception hierarchy shared by every package.

Input problems derive from ValueError as well, so callers that only know
the builtin still catch them. Cap errors are recoverable: structure and
tower code turn them into partial-verification flags.
"""


class KTheoryError(Exception):
    """Base class for all errors raised by this project."""


class InvalidInputError(KTheoryError, ValueError):
    """Input outside an operation's domain."""


class SingularCurveError(InvalidInputError):
    """Weierstrass coefficients with vanishing discriminant."""


class NonResidueError(InvalidInputError):
    """Square root requested of a non-square (or twist by a square)."""


class FieldMismatchError(InvalidInputError):
    """Points or elements living in different fields."""


class WeilBoundError(InvalidInputError):
    """Point counts that no curve of the given genus can have."""


class CapExceededError(KTheoryError):
    """A configured computation cap was hit."""


class FieldDegreeCapError(CapExceededError):
    """Extension degree above the configured field-degree cap."""


class EnumerationBoundError(CapExceededError):
    """Field too large for exhaustive point enumeration."""


class BitsBudgetError(CapExceededError):
    """Exact big-integer evaluation would exceed the bits budget."""


class SamplingBudgetExhausted(KTheoryError):
    """Random sampling did not reach the required torsion; raise the budget."""


class TowerWindowExhausted(KTheoryError):
    """Valuation differences did not stabilize inside the window."""


class GoldenDataError(KTheoryError):
    """Golden CSV content that fails to parse or disagrees with itself."""
