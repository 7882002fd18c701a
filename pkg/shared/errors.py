"""
Error Types
Exception hierarchy shared by the numerical modules and the simulator.
"""


class OneBitError(Exception):
    """Base class for all errors raised by this package."""
    pass


class ConfigError(OneBitError):
    """Raised when an experiment configuration is invalid."""
    pass


class InvalidInputError(OneBitError, ValueError):
    """Raised when an argument violates a precondition (shape, range, symmetry)."""
    pass


class NumericalError(OneBitError):
    """Raised when a numerical computation cannot produce a trustworthy result."""
    pass


class NotPositiveDefiniteError(NumericalError):
    """Raised when a covariance matrix is not positive (semi-)definite."""
    pass


class SingularCorrelationError(NumericalError):
    """Raised when a correlation coefficient is too close to +/-1."""
    pass


class TableConsistencyError(NumericalError):
    """Raised when detector tables fail their internal consistency checks."""
    pass


class QuadratureError(NumericalError):
    """Raised when numerical integration does not converge."""
    pass


class PerturbationError(NumericalError):
    """Raised when no positive definite perturbed covariance can be drawn."""
    pass
