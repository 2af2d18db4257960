"""Exception taxonomy shared across the toolkit.

Everything numeric derives from :class:`NumericsError`; the CLI maps that
branch to exit code 2 and argument problems to exit code 1.
"""


class NumericsError(Exception):
    """Base class for numeric/estimation failures."""


class InvalidParams(NumericsError):
    """Parameter values outside the family's domain."""


class InvalidTuning(NumericsError):
    """Tuning pair (alpha, beta) outside its admissible range."""


class TuningOutOfRange(InvalidTuning):
    """Tuning violates an estimator-specific constraint."""


class SupportMismatch(NumericsError):
    """First density puts mass where the second has none (or kinds differ)."""


class QuadratureFailure(NumericsError):
    """Adaptive quadrature could not reach the requested tolerance."""


class NonIntegrable(NumericsError):
    """A component integral diverges or is numerically non-finite."""


class LogOfNonPositive(NumericsError):
    """An inner integral that must be positive came out <= 0."""


class OutsideSupport(NumericsError):
    """Evaluation point falls outside the density's support."""


class AllOutsideSupport(NumericsError):
    """Every observation lies outside the model support."""


class DegenerateSample(NumericsError):
    """Sample carries no usable spread for the requested operation."""


class NoFeasibleCell(NumericsError):
    """Piecewise maximization found no cell with active observations."""


class EmptyInput(NumericsError):
    """An operation received an empty collection."""


class ZeroHbar(NumericsError):
    """Weighted denominator statistic h-bar is zero."""


class ZeroMassCell(NumericsError):
    """A conditioning cell has zero deformed probability."""


class StepTooLarge(NumericsError):
    """One-sided derivative estimates disagree beyond tolerance."""


class EnumerationTooLarge(NumericsError):
    """|S|^n exceeds the enumeration bound."""


class DegenerateNormalizer(NumericsError):
    """Deformed distribution cannot be normalized."""


class ParseError(ValueError):
    """Malformed dataset row; carries the 1-based line number."""

    def __init__(self, line_number, message):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class EmptyFile(ValueError):
    """Dataset file contains no values."""
