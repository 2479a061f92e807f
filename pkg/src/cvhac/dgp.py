"""Synthetic regressors and errors for the simulation experiments.

Every simulator takes an explicit :class:`numpy.random.Generator`, so results
depend only on the stream that is passed in. Autocovariance oracles used by the
tests live here as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.signal import lfilter

from .errors import ConfigError, DataError, StationarityError

BURN_IN = 1000


@dataclass(frozen=True)
class ArSpec:
    """Gaussian AR(p): ``x_t = intercept + sum_k phi_k x_{t-k} + sd * e_t``."""

    phi: tuple = ()
    intercept: float = 0.0
    innovation_sd: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(float(p) for p in np.atleast_1d(self.phi)))
        if not self.innovation_sd > 0:
            raise ConfigError(f"innovation_sd must be positive, got {self.innovation_sd}")
        if not np.all(np.isfinite(self.phi)) or not np.isfinite(self.intercept):
            raise ConfigError("AR coefficients and intercept must be finite")

    @property
    def order(self) -> int:
        return len(self.phi)

    def inverse_roots(self) -> np.ndarray:
        """Eigenvalues of the companion matrix, i.e. reciprocals of the AR polynomial roots."""
        p = self.order
        if p == 0:
            return np.array([])
        B = np.zeros((p, p))
        B[0] = self.phi
        B[1:, :-1] = np.eye(p - 1)
        return np.linalg.eigvals(B)

    def roots(self) -> np.ndarray:
        """Roots of ``1 - phi_1 z - ... - phi_p z^p`` (zero inverse roots are dropped)."""
        inv = self.inverse_roots()
        inv = inv[inv != 0]
        return 1 / inv

    def is_stationary(self) -> bool:
        inv = self.inverse_roots()
        return bool(inv.size == 0 or np.max(np.abs(inv)) < 1.0 - 1e-12)

    def check_stationary(self):
        if not self.is_stationary():
            raise StationarityError(
                f"AR coefficients {self.phi} are not stationary: "
                f"max |inverse root| = {np.max(np.abs(self.inverse_roots())):.6g}"
            )

    @property
    def mean(self) -> float:
        return self.intercept / (1.0 - sum(self.phi))


@dataclass(frozen=True)
class MaSpec:
    """Gaussian MA(2): ``x_t = intercept + e_t + theta_1 e_{t-1} + theta_2 e_{t-2}``."""

    theta: tuple = (0.0, 0.0)
    intercept: float = 0.0
    innovation_sd: float = 1.0

    def __post_init__(self):
        theta = tuple(float(t) for t in np.atleast_1d(self.theta))
        if len(theta) != 2:
            raise ConfigError(f"MA spec needs exactly two coefficients, got {theta}")
        object.__setattr__(self, "theta", theta)
        if not self.innovation_sd > 0:
            raise ConfigError(f"innovation_sd must be positive, got {self.innovation_sd}")
        if not np.all(np.isfinite(theta)) or not np.isfinite(self.intercept):
            raise ConfigError("MA coefficients and intercept must be finite")

    @property
    def mean(self) -> float:
        return self.intercept


SeriesSpec = Union[ArSpec, MaSpec]


@dataclass
class RegressionDataset:
    """``y = X beta + u`` with the intercept in the first column of ``X``."""

    y: np.ndarray
    X: np.ndarray
    true_beta: np.ndarray = field(default=None)

    def __post_init__(self):
        # contiguous copies keep BLAS results independent of how the data was loaded
        self.y = np.ascontiguousarray(self.y, dtype=float)
        self.X = np.ascontiguousarray(self.X, dtype=float)
        if self.X.ndim != 2 or self.y.ndim != 1 or len(self.y) != len(self.X):
            raise DataError(f"shape mismatch: y {self.y.shape}, X {self.X.shape}")
        if not (np.all(np.isfinite(self.X)) and np.all(np.isfinite(self.y))):
            raise DataError("dataset contains non-finite values")
        if not np.all(self.X[:, 0] == 1.0):
            raise DataError("first column of X must be the intercept (all ones)")
        if self.n <= self.X.shape[1]:
            raise DataError(f"need n > d+1 observations, got n={self.n}, d+1={self.X.shape[1]}")
        if self.true_beta is not None:
            self.true_beta = np.asarray(self.true_beta, dtype=float)

    @property
    def n(self) -> int:
        return len(self.y)

    @property
    def d(self) -> int:
        return self.X.shape[1] - 1


def simulate_ar(spec: ArSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` observations of a stationary AR(p) process.

    The recursion starts at the process mean and the first ``BURN_IN`` draws
    are discarded.
    """
    spec.check_stationary()
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    burn = BURN_IN if spec.order else 0
    eps = rng.standard_normal(n + burn) * spec.innovation_sd
    if spec.order:
        dev = lfilter([1.0], np.r_[1.0, -np.asarray(spec.phi)], eps)
    else:
        dev = eps
    return spec.mean + dev[burn:]


def simulate_ma(spec: MaSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Exact stationary MA(2) draw; innovations for lags -2, -1 are sampled too."""
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    eps = rng.standard_normal(n + 2) * spec.innovation_sd
    t1, t2 = spec.theta
    return spec.intercept + eps[2:] + t1 * eps[1:-1] + t2 * eps[:-2]


def simulate(spec: SeriesSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    if isinstance(spec, ArSpec):
        return simulate_ar(spec, n, rng)
    if isinstance(spec, MaSpec):
        return simulate_ma(spec, n, rng)
    raise ConfigError(f"unknown series spec {spec!r}")


def make_dataset(
    regressor_specs: Sequence[SeriesSpec],
    error_spec: SeriesSpec,
    n: int,
    rng: np.random.Generator,
    beta=None,
) -> RegressionDataset:
    """Simulate ``y = X beta + u`` with mutually independent regressors and error.

    Each series draws from its own child stream spawned from ``rng``, in the
    order regressors first, error last. ``beta`` defaults to zero.
    """
    d = len(regressor_specs)
    if beta is None:
        beta = np.zeros(d + 1)
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (d + 1,):
        raise ConfigError(f"beta must have length d+1={d + 1}, got shape {beta.shape}")
    streams = rng.spawn(d + 1)
    cols = [simulate(spec, n, s) for spec, s in zip(regressor_specs, streams[:d])]
    u = simulate(error_spec, n, streams[d])
    X = np.column_stack([np.ones(n)] + cols)
    return RegressionDataset(y=X @ beta + u, X=X, true_beta=beta)


def acvf_ar(spec: ArSpec, max_lag: int) -> np.ndarray:
    """Exact autocovariances ``gamma(0..max_lag)`` from the Yule-Walker system."""
    spec.check_stationary()
    p = spec.order
    var_e = spec.innovation_sd ** 2
    if p == 0:
        out = np.zeros(max_lag + 1)
        out[0] = var_e
        return out
    phi = np.asarray(spec.phi)
    # unknowns gamma(0..p); row k: gamma(k) - sum_i phi_i gamma(|k-i|) = var_e * [k == 0]
    M = np.eye(p + 1)
    for k in range(p + 1):
        for i in range(1, p + 1):
            M[k, abs(k - i)] -= phi[i - 1]
    rhs = np.zeros(p + 1)
    rhs[0] = var_e
    gamma = list(np.linalg.solve(M, rhs))
    for k in range(p + 1, max_lag + 1):
        gamma.append(sum(phi[i - 1] * gamma[k - i] for i in range(1, p + 1)))
    return np.asarray(gamma[: max_lag + 1])


def acvf_ma(spec: MaSpec, max_lag: int) -> np.ndarray:
    """Autocovariances of the MA(2) process: ``gamma(1) = (t1 + t1 t2) s^2``, ``gamma(2) = t2 s^2``."""
    psi = np.r_[1.0, spec.theta]
    out = np.zeros(max_lag + 1)
    for r in range(min(max_lag, 2) + 1):
        out[r] = np.dot(psi[: 3 - r], psi[r:]) * spec.innovation_sd ** 2
    return out


def acvf(spec: SeriesSpec, max_lag: int) -> np.ndarray:
    if isinstance(spec, ArSpec):
        return acvf_ar(spec, max_lag)
    return acvf_ma(spec, max_lag)


def regressor_acvf(regressor_specs: Sequence[SeriesSpec], max_lag: int):
    """Autocovariance matrices of ``X_t = (1, x_1t, ..., x_dt)`` and its mean.

    Returns ``(gamma_X, mu_X)`` where ``gamma_X[r]`` is the (d+1)x(d+1)
    autocovariance at lag ``r``; the intercept row/column is zero because the
    constant has no variance.
    """
    d = len(regressor_specs)
    gamma_X = np.zeros((max_lag + 1, d + 1, d + 1))
    for i, spec in enumerate(regressor_specs, start=1):
        gamma_X[:, i, i] = acvf(spec, max_lag)
    mu_X = np.r_[1.0, [s.mean for s in regressor_specs]]
    return gamma_X, mu_X


def gamma_v_oracle(gamma_u, gamma_X, mu_X, r: int) -> np.ndarray:
    """Autocovariance of ``V_t = u_t X_t`` at lag ``r`` for independent Gaussian ``u`` and ``X``.

    ``gamma_u`` and ``gamma_X`` are indexed by nonnegative lag; negative ``r``
    uses the transpose.
    """
    gamma_u = np.asarray(gamma_u, dtype=float)
    gamma_X = np.asarray(gamma_X, dtype=float)
    mu_X = np.asarray(mu_X, dtype=float)
    lag = abs(r)
    if lag >= len(gamma_u) or lag >= len(gamma_X):
        raise ConfigError(f"lag {r} exceeds the supplied autocovariances")
    if gamma_X.shape[1:] != (len(mu_X), len(mu_X)):
        raise ConfigError(f"gamma_X blocks {gamma_X.shape[1:]} do not match mu_X of length {len(mu_X)}")
    out = gamma_u[lag] * (gamma_X[lag] + np.outer(mu_X, mu_X))
    return out if r >= 0 else out.T
