"""HAC covariance estimation with VAR-prewhitened kernel estimators and
frequency-domain cross-validated order and bandwidth selection."""

from .cvll import CandidateGrid, estimate_cvll, select
from .dgp import ArSpec, MaSpec, RegressionDataset, make_dataset
from .errors import ConfigError, DataError, HacError, NumericalError
from .lrv import estimate_am, estimate_am_pw, estimate_am_pw_unadj, prewhitened_lrv
from .regress import moment_series, ols_fit, sandwich, standard_errors

__all__ = [
    "ArSpec", "MaSpec", "RegressionDataset", "make_dataset",
    "ols_fit", "moment_series", "sandwich", "standard_errors",
    "estimate_am", "estimate_am_pw", "estimate_am_pw_unadj", "prewhitened_lrv",
    "CandidateGrid", "estimate_cvll", "select",
    "HacError", "ConfigError", "DataError", "NumericalError",
]
