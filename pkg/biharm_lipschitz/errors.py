"""
Exception hierarchy for biharm_lipschitz.

Every error raised on purpose by the library derives from BiharmError and
from the builtin exception a caller would naturally catch (ValueError for bad
input, ArithmeticError for numerical breakdown).
"""


class BiharmError(Exception):
    """Base class for all library errors."""


class InvalidGrid(BiharmError, ValueError):
    """GridSpec or GridFunction violates its invariants."""


class SymmetryViolation(BiharmError, ValueError):
    """Spectral coefficients are not conjugate symmetric."""


class NonLatticeShift(BiharmError, ValueError):
    """Shift vector is not an integer multiple of the grid spacing."""


class BadQuadrature(BiharmError, ValueError):
    """Quadrature description is too coarse to be trusted."""


class InsufficientRange(BiharmError, ValueError):
    """Radial profile does not cover the range needed by a check."""


class SingularAtZero(BiharmError, ArithmeticError):
    """Symbol singular at the origin evaluated at xi = 0."""


class NonZeroMean(BiharmError, ValueError):
    """Function with a non-negligible mean passed where mean zero is required."""


class QuadratureDivergence(BiharmError, ArithmeticError):
    """Truncated tail of an improper integral exceeds tolerance."""


class DomainError(BiharmError, ValueError):
    """Parameter outside the range where the operation is defined."""


class SpectrumOverflow(BiharmError, ValueError):
    """Requested modes do not fit below half the Nyquist frequency."""


class ConfigError(BiharmError, ValueError):
    """Invalid run configuration."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class SuiteJobError(BiharmError, RuntimeError):
    """A verification job raised; carries the job context."""
