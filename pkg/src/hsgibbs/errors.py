"""Exception hierarchy shared across the package."""


class HsError(Exception):
    """Base class for all package errors."""


class ParameterDomainError(HsError, ValueError):
    """A distribution parameter or argument is outside its support."""


class ConfigurationError(HsError, ValueError):
    """An operation was invoked under an incompatible sampler configuration."""


class DataError(HsError, ValueError):
    """Input data is malformed (parse failures, dimension mismatches)."""


class NumericalError(HsError, ArithmeticError):
    """A linear-algebra or density evaluation failed numerically."""

    def __init__(self, message, *, jitter_levels=None, block=None):
        super().__init__(message)
        self.jitter_levels = list(jitter_levels) if jitter_levels else []
        self.block = block
