"""Exception and warning types shared across the package."""


class VarJacobiError(Exception):
    """Base class for all package errors."""


class DomainError(VarJacobiError, ValueError):
    """Arguments outside the domain where a formula is defined."""


class ConfigError(VarJacobiError, ValueError):
    """Invalid sweep or command-line configuration."""


class RegimeError(VarJacobiError):
    """An estimator was called for a parameter point outside its regime."""


class IntegerGammaError(RegimeError):
    """The growth asymptote needs a non-integer first parameter an + alpha."""


class CertificateRefused(RegimeError):
    """No decaying bound exists at this point (exponential growth instead)."""


class ConvergenceError(VarJacobiError):
    """Adaptive quadrature hit its subdivision limit before reaching tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class ConsistencyError(VarJacobiError):
    """Two algebraically equivalent forms of a result disagree."""


class InsufficientData(VarJacobiError, ValueError):
    """Too few usable points for a fit."""


class PrecisionWarning(UserWarning):
    """Cancellation in the explicit sum exceeds the available precision."""


class BreakdownWarning(UserWarning):
    """Parameter close to a regime boundary, where a leading-order formula degrades."""


class SaturationWarning(UserWarning):
    """A log-magnitude quantity was converted to a float and overflowed."""
