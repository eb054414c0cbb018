"""Exception hierarchy.

The CLI maps these onto exit codes: ``ConfigError`` -> 1, ``DataError`` -> 2,
``NumericalError`` -> 3.
"""


class FinestratError(Exception):
    """Base class for all package errors."""


class ConfigError(FinestratError, ValueError):
    """Invalid configuration, plan, or argument."""


class DataError(FinestratError, ValueError):
    """Input data violates a schema or a precondition."""


class NotEstimableError(DataError):
    """The requested estimator is undefined for this sample (e.g. one PSU per stratum)."""


class NumericalError(FinestratError, ArithmeticError):
    """A numerical step failed (non-PD matrix, degenerate normalizing constant)."""


class DegenerateBandwidthError(NumericalError):
    """Kernel normalizing constant C_d collapsed to zero."""
