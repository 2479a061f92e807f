"""OLS fitting, the moment series ``V_t = u_t X_t`` and sandwich assembly."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import ConfigError, SingularMatrixError

COND_LIMIT = 1e12
ESTIMATOR_TAGS = ("AM", "AM-PW", "AM-PW-unadj", "CVLL")


@dataclass
class OlsFit:
    beta_hat: np.ndarray
    residuals: np.ndarray
    XtX_over_n: np.ndarray

    @property
    def n(self) -> int:
        return len(self.residuals)


@dataclass
class MomentSeries:
    """Rows ``V_t = u_t * X_t``; ``d`` counts the nonconstant regressors."""

    V: np.ndarray

    @property
    def n(self) -> int:
        return self.V.shape[0]

    @property
    def d(self) -> int:
        return self.V.shape[1] - 1


@dataclass
class HacEstimate:
    """Long-run variance estimate of the moment series plus how it was obtained."""

    S_hat: np.ndarray
    estimator_tag: str
    selected_order: int = 0
    selected_bandwidth: float = float("nan")
    adjustment_triggered: bool = False
    prewhitener_spectral_radius: float = float("nan")
    distortion: float = 0.0


def ols_fit(data) -> OlsFit:
    """Least squares on ``data.y`` and ``data.X``.

    Raises :class:`SingularMatrixError` when ``X'X`` has condition number above
    ``COND_LIMIT`` instead of falling back to a pseudo-inverse.
    """
    X = np.asarray(data.X, dtype=float)
    y = np.asarray(data.y, dtype=float)
    n = len(y)
    s = np.linalg.svd(X, compute_uv=False)
    if s[-1] == 0 or (s[0] / s[-1]) ** 2 > COND_LIMIT:
        cond = np.inf if s[-1] == 0 else (s[0] / s[-1]) ** 2
        raise SingularMatrixError(f"regressors are collinear: cond(X'X) = {cond:.3g}")
    Q, R = np.linalg.qr(X)
    beta = np.linalg.solve(R, Q.T @ y)
    resid = y - X @ beta
    return OlsFit(beta_hat=beta, residuals=resid, XtX_over_n=X.T @ X / n)


def moment_series(fit: OlsFit, X) -> MomentSeries:
    X = np.asarray(X, dtype=float)
    if X.shape[0] != fit.n:
        raise ConfigError(f"X has {X.shape[0]} rows but the fit has {fit.n} residuals")
    return MomentSeries(V=fit.residuals[:, None] * X)


def sandwich(S_n, S_hat) -> np.ndarray:
    """``S_n^{-1} S_hat S_n^{-1}``, an estimate of ``n Var(beta_hat)``."""
    S_n = np.asarray(S_n, dtype=float)
    S_hat = np.asarray(S_hat, dtype=float)
    try:
        cond = np.linalg.cond(S_n)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise np.linalg.LinAlgError
        bread = np.linalg.inv(S_n)
    except np.linalg.LinAlgError:
        raise SingularMatrixError("S_n is singular") from None
    out = bread @ S_hat @ bread
    return (out + out.T) / 2


def standard_errors(cov_n, n: int) -> np.ndarray:
    """Standard errors from an estimate of ``n Var(beta_hat)``."""
    return np.sqrt(np.diag(cov_n) / n)


def critical_value(alpha: float) -> float:
    if alpha not in (0.1, 0.05, 0.01):
        raise ConfigError(f"alpha must be one of 0.1, 0.05, 0.01; got {alpha}")
    return float(norm.ppf(1 - alpha / 2))


def confidence_interval(beta_i: float, se_i: float, alpha: float = 0.05):
    """Normal-theory two-sided interval ``beta_i -/+ z_{alpha/2} se_i``."""
    if not se_i >= 0:
        raise ConfigError(f"standard error must be nonnegative, got {se_i}")
    z = critical_value(alpha)
    return beta_i - z * se_i, beta_i + z * se_i
