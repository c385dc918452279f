"""Exception types raised across the package."""


class QSeriesError(Exception):
    """Base class for all package errors."""


class NotInvertible(QSeriesError, ZeroDivisionError):
    """Raised when inverting a series (or factor) whose leading part vanishes."""


class DegenerateProduct(QSeriesError):
    """The infinite product contains the factor (1 - 1) and is identically zero."""


class NonConvergentTheta(QSeriesError):
    """Theta argument exponents do not sum to a positive power of q."""


class TailTooLarge(QSeriesError):
    """The truncated series cannot be evaluated to the requested precision."""


class DomainError(QSeriesError, ValueError):
    pass


class EngelStall(QSeriesError):
    """The Engel recursion ran out of truncation order before finishing."""

    def __init__(self, message, digits=()):
        super().__init__(message)
        self.digits = list(digits)


class NotUnitLeading(QSeriesError):
    pass


class DegenerateBasis(QSeriesError):
    """Lattice basis rows are linearly dependent."""


class InsufficientPrecision(QSeriesError):
    pass


class DivergentTerm(QSeriesError):
    """A family's summands do not gain order in the summation index."""


class OrderTooLow(QSeriesError):
    pass


class IncompatibleSpecialization(QSeriesError):
    """A Bailey pair's x parameter does not fit the requested transform."""


class VerificationError(QSeriesError):
    """Internal exactness check failed (nonzero remainder etc)."""
