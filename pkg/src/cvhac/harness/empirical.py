"""Regression on user data: four HAC standard errors, stars and VAR diagnostics."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from ..cvll import CandidateGrid, estimate_cvll
from ..dgp import RegressionDataset
from ..errors import ConfigError, DataError
from ..lrv import estimate_am, estimate_am_pw, estimate_am_pw_unadj, prewhitened_lrv
from ..regress import ESTIMATOR_TAGS, moment_series, ols_fit, sandwich, standard_errors
from ..varfit import burg_var, eigen_adjust, ols_var


def read_regression_csv(path, y_column: str, x_columns) -> RegressionDataset:
    """Load ``y`` and regressors from a headed UTF-8 CSV; an intercept is prepended."""
    x_columns = list(x_columns)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataError(f"{path}: missing header row")
        header = [h.strip() for h in reader.fieldnames]
        reader.fieldnames = header
        wanted = [y_column] + x_columns
        missing = [c for c in wanted if c not in header]
        if missing:
            raise DataError(f"{path}: missing column(s) {missing}; available: {header}")
        rows = []
        for line, record in enumerate(reader, start=2):
            row = []
            for col in wanted:
                cell = (record.get(col) or "").strip()
                if cell == "":
                    raise DataError(f"{path}: empty cell at row {line}, column {col!r}")
                try:
                    value = float(cell)
                except ValueError:
                    raise DataError(f"{path}: non-numeric cell {cell!r} at row {line}, column {col!r}") from None
                if not math.isfinite(value):
                    raise DataError(f"{path}: non-finite cell {cell!r} at row {line}, column {col!r}")
                row.append(value)
            rows.append(row)
    data = np.asarray(rows, dtype=float).reshape(-1, len(wanted))
    n = data.shape[0]
    if n <= len(x_columns) + 1:
        raise DataError(f"{path}: {n} rows is too few for {len(x_columns)} regressors plus an intercept")
    X = np.column_stack([np.ones(n), data[:, 1:]])
    return RegressionDataset(y=data[:, 0], X=X)


def stars(p_value: float) -> str:
    if not np.isfinite(p_value):
        return ""
    if p_value < 0.001:
        return "***"
    if p_value < 0.01:
        return "**"
    if p_value < 0.05:
        return "*"
    return ""


def p_value(beta: float, se: float, null: float = 0.0) -> float:
    """Two-sided normal p-value of ``(beta - null) / se``."""
    if not (np.isfinite(se) and se > 0):
        return float("nan")
    return float(2 * norm.sf(abs(beta - null) / se))


@dataclass
class EmpiricalResult:
    names: list
    beta: np.ndarray
    se: dict
    p_values: dict
    stars: dict
    n: int
    diagnostics: dict = field(default_factory=dict)

    def rows(self):
        out = []
        for i, name in enumerate(self.names):
            row = {"coefficient": name, "estimate": self.beta[i]}
            for tag in self.se:
                row[f"se_{tag}"] = self.se[tag][i]
                row[f"stars_{tag}"] = self.stars[tag][i]
            out.append(row)
        return out


def _estimator_table(grid, q_unadj):
    return {
        "AM": estimate_am,
        "AM-PW": estimate_am_pw,
        "AM-PW-unadj": lambda V: estimate_am_pw_unadj(V, q_unadj),
        "CVLL": lambda V: estimate_cvll(V, grid),
    }


def var_diagnostics(V) -> dict:
    """Eigenvalue and singular-value moduli of the OLS VAR(1) and the Burg VAR(1) eigenvalues."""
    A = ols_var(V, 1).coefs[0]
    report = eigen_adjust(A)
    burg = burg_var(V, 1).coefs[0]
    return {
        "ols_eigenvalues": report.eigenvalues,
        "ols_singular_values": report.singular_values,
        "adjustment_triggered": report.triggered,
        "adjustment_distortion": report.distortion,
        "burg_eigenvalues": np.sort(np.abs(np.linalg.eigvals(burg)))[::-1],
    }


def fit_dataset(data: RegressionDataset, estimators=ESTIMATOR_TAGS, grid: CandidateGrid = None,
                names=None, null=0.0, q_unadj: int = 1) -> EmpiricalResult:
    """OLS plus the requested HAC standard errors and significance stars.

    ``null`` is the hypothesized coefficient value (scalar or per coefficient);
    ``q_unadj`` is the prewhitening order of the unadjusted OLS estimator.
    """
    grid = grid or CandidateGrid()
    unknown = set(estimators) - set(ESTIMATOR_TAGS)
    if unknown:
        raise ConfigError(f"unknown estimators {sorted(unknown)}")
    fit = ols_fit(data)
    V = moment_series(fit, data.X).V
    n = data.n
    names = names or ["const"] + [f"x{i}" for i in range(1, data.d + 1)]
    nulls = np.broadcast_to(np.asarray(null, dtype=float), fit.beta_hat.shape)
    table = _estimator_table(grid, q_unadj)
    se, pv, st = {}, {}, {}
    diagnostics = var_diagnostics(V)
    diagnostics["column_means_X"] = data.X.mean(axis=0)
    for tag in estimators:
        est = table[tag](V)
        se[tag] = standard_errors(sandwich(fit.XtX_over_n, est.S_hat), n)
        pv[tag] = [p_value(b, s, h) for b, s, h in zip(fit.beta_hat, se[tag], nulls)]
        st[tag] = [stars(p) for p in pv[tag]]
        if tag == "CVLL":
            diagnostics["cvll_order"] = est.selected_order
            diagnostics["cvll_bandwidth"] = est.selected_bandwidth
    return EmpiricalResult(names=list(names), beta=fit.beta_hat, se=se, p_values=pv, stars=st, n=n,
                           diagnostics=diagnostics)


def fit_csv(path, y_column: str, x_columns, estimators=ESTIMATOR_TAGS, grid: CandidateGrid = None,
            null=0.0, q_unadj: int = 1) -> EmpiricalResult:
    data = read_regression_csv(path, y_column, x_columns)
    return fit_dataset(data, estimators, grid, names=["const"] + list(x_columns), null=null, q_unadj=q_unadj)


def order_sweep(data: RegressionDataset, max_order: int = 16, coef: int = 1):
    """Standard error of one coefficient for OLS-prewhitened QS estimates of order ``0..max_order``.

    Order 0 is the plain QS estimator with the plug-in bandwidth; higher orders
    use an OLS VAR without eigen adjustment. Returns a list of dict rows.
    """
    if not 0 <= coef <= data.d:
        raise ConfigError(f"coefficient index must lie in 0..{data.d}, got {coef}")
    fit = ols_fit(data)
    V = moment_series(fit, data.X).V
    n, k = V.shape
    if max_order < 0 or n <= k * max_order + max_order:
        raise DataError(f"order {max_order} is too large for n={n} with {k} moment columns")
    rows = []
    for q in range(max_order + 1):
        est = prewhitened_lrv(V, q=q, fit_method="ols", adjust=False)
        se = standard_errors(sandwich(fit.XtX_over_n, est.S_hat), n)[coef]
        rows.append({"order": q, "se": float(se), "bandwidth": est.selected_bandwidth,
                     "estimate": float(fit.beta_hat[coef])})
    return rows
