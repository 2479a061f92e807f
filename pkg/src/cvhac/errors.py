"""Exception hierarchy shared by the estimators and the CLI."""


class HacError(Exception):
    """Base class for every error raised by :mod:`cvhac`."""

    exit_code = 1


class ConfigError(HacError, ValueError):
    """Invalid user configuration (bad flag, grid, level, dimension)."""

    exit_code = 2


class DataError(HacError, ValueError):
    """Input data that cannot be used (missing column, bad cell, too short)."""

    exit_code = 3


class NumericalError(HacError, ArithmeticError):
    """A numerical procedure failed."""

    exit_code = 4


class StationarityError(NumericalError):
    """An autoregressive specification or fit is not stationary."""


class SingularMatrixError(NumericalError):
    """A matrix that must be inverted is (numerically) singular.

    ``eigenvalue`` optionally carries the offending eigenvalue, e.g. the root
    of ``I - sum(A_k)`` closest to zero when recoloring a VAR filter.
    """

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue
