"""Exception types shared across the package."""


class NumericalError(ArithmeticError):
    """Base class for failures of the numerical kernels."""


class SingularMatrixError(NumericalError):
    """Raised when a pivot falls below the singularity threshold."""


class ConvergenceError(NumericalError):
    """Raised when an iterative solver exhausts its iteration budget."""


class UnstableOperatingPoint(ValueError):
    """The requested quantity is undefined because the system is unstable."""


class ConditionError(ValueError):
    """An operating condition required by a closed-form result does not hold."""


class UnphysicalCovarianceError(ValueError):
    """A covariance matrix violates the uncertainty principle."""
