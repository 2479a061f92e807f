"""Prewhitening VAR fits, companion matrices and the eigen-adjustment rule.

Two estimators of ``V_t = sum_{i<=q} A_i V_{t-i} + e_t`` (no intercept) are
provided: multivariate least squares and a multichannel Burg recursion. The
Burg recursion estimates one normalized partial correlation matrix per stage
from forward and backward prediction errors and propagates the coefficients
with the Whittle (multivariate Levinson) order update. Each normalized
partial correlation has spectral norm below one, which makes the fitted model
stationary for every input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError, NumericalError, SingularMatrixError, StationarityError

EIGEN_THRESHOLD = 0.97
OLS = "ols"
BURG = "burg"


@dataclass
class VarModel:
    """A fitted VAR(q).

    ``coefs`` has shape ``(q, k, k)`` with ``coefs[i-1] = A_i``; ``residuals``
    holds the prediction errors for ``t = q, ..., n-1``.
    """

    coefs: np.ndarray
    residuals: np.ndarray
    method: str
    sigma: np.ndarray = field(default=None)

    @property
    def order(self) -> int:
        return self.coefs.shape[0]

    @property
    def k(self) -> int:
        return self.coefs.shape[1]

    def companion(self) -> np.ndarray:
        return companion(self.coefs)

    def spectral_radius(self) -> float:
        return spectral_radius(self.companion())


@dataclass
class AdjustmentReport:
    singular_values: np.ndarray
    triggered: bool
    adjusted: np.ndarray
    distortion: float
    eigenvalues: np.ndarray
    adjusted_eigenvalues: np.ndarray


def var_residuals(V, coefs) -> np.ndarray:
    """``V_t - sum_i A_i V_{t-i}`` for ``t = q..n-1``."""
    V = np.asarray(V, dtype=float)
    q = len(coefs)
    n = V.shape[0]
    resid = V[q:].copy()
    for i in range(1, q + 1):
        resid -= V[q - i:n - i] @ coefs[i - 1].T
    return resid


def _check_input(V, q):
    V = np.asarray(V, dtype=float)
    if V.ndim == 1:
        V = V[:, None]
    if q < 1 or int(q) != q:
        raise ConfigError(f"VAR order must be a positive integer, got {q}")
    n, k = V.shape
    if n <= k * q + q:
        raise DataError(f"too few observations ({n}) for a VAR({q}) in {k} dimensions")
    if not np.all(np.isfinite(V)):
        raise DataError("moment series contains non-finite values")
    return V


def ols_var(V, q: int = 1) -> VarModel:
    """Multivariate least squares without intercept."""
    V = _check_input(V, q)
    n, k = V.shape
    Z = np.hstack([V[q - i:n - i] for i in range(1, q + 1)])
    Y = V[q:]
    ZtZ = Z.T @ Z
    s = np.linalg.svd(ZtZ, compute_uv=False)
    if s[-1] <= s[0] * 1e-14:
        raise SingularMatrixError("lagged regressor cross-product is singular")
    B = np.linalg.solve(ZtZ, Z.T @ Y)  # (k*q, k)
    coefs = B.T.reshape(k, q, k).transpose(1, 0, 2)
    resid = Y - Z @ B
    return VarModel(coefs=coefs, residuals=resid, method=OLS, sigma=resid.T @ resid / len(resid))


def _sym_sqrt(M):
    w, U = np.linalg.eigh((M + M.T) / 2)
    if w[0] <= w[-1] * 1e-14 or w[-1] <= 0:
        raise SingularMatrixError("prediction error covariance is singular", eigenvalue=w[0])
    return (U * np.sqrt(w)) @ U.T, (U / np.sqrt(w)) @ U.T


def burg_path(V, q_max: int):
    """Multichannel Burg fits of every order ``1..q_max``.

    Returns a list of :class:`VarModel` whose element ``i`` has order ``i+1``.
    The lower orders are the intermediate stages of the same recursion.
    """
    V = _check_input(V, q_max)
    n, k = V.shape
    if not np.any(V):
        raise DataError("Burg fit of an all-zero series is undefined")
    gamma0 = V.T @ V / n
    vf = gamma0.copy()
    vb = gamma0.copy()
    fwd = np.zeros((0, k, k))  # A_1..A_p of the forward predictor
    bwd = np.zeros((0, k, k))  # backward predictor coefficients
    ef = V.copy()  # forward errors e_p(t), t = p..n-1
    eb = V.copy()  # backward errors b_p(t), t = p..n-1
    models = []
    for p in range(q_max):
        f = ef[1:]
        b = eb[:-1]
        pf = f.T @ f
        pb = b.T @ b
        pfb = f.T @ b
        _, pf_isqrt = _sym_sqrt(pf)
        _, pb_isqrt = _sym_sqrt(pb)
        rho = pf_isqrt @ pfb @ pb_isqrt
        if np.linalg.norm(rho, 2) >= 1 - 1e-12:
            raise NumericalError("forward and backward errors are perfectly correlated")
        vf_sqrt, vf_isqrt = _sym_sqrt(vf)
        vb_sqrt, vb_isqrt = _sym_sqrt(vb)
        delta = vf_sqrt @ rho @ vb_sqrt
        kf = delta @ vb_isqrt @ vb_isqrt
        kb = delta.T @ vf_isqrt @ vf_isqrt
        new_fwd = np.empty((p + 1, k, k))
        new_bwd = np.empty((p + 1, k, k))
        for i in range(p):
            new_fwd[i] = fwd[i] - kf @ bwd[p - 1 - i]
            new_bwd[i] = bwd[i] - kb @ fwd[p - 1 - i]
        new_fwd[p] = kf
        new_bwd[p] = kb
        fwd, bwd = new_fwd, new_bwd
        vf, vb = vf - kf @ delta.T, vb - kb @ delta
        vf, vb = (vf + vf.T) / 2, (vb + vb.T) / 2
        ef, eb = f - b @ kf.T, b - f @ kb.T
        resid = var_residuals(V, fwd)
        models.append(VarModel(coefs=fwd.copy(), residuals=resid, method=BURG, sigma=vf.copy()))
    return models


def burg_var(V, q: int = 1) -> VarModel:
    return burg_path(V, q)[-1]


def fit_var(V, q: int, method: str = BURG) -> VarModel:
    if method == BURG:
        return burg_var(V, q)
    if method == OLS:
        return ols_var(V, q)
    raise ConfigError(f"unknown VAR fit method {method!r}")


def fit_var_path(V, q_max: int, method: str = BURG):
    """Fits of orders ``1..q_max``; Burg shares one recursion across orders."""
    if method == BURG:
        return burg_path(V, q_max)
    if method == OLS:
        return [ols_var(V, q) for q in range(1, q_max + 1)]
    raise ConfigError(f"unknown VAR fit method {method!r}")


def companion(coefs) -> np.ndarray:
    coefs = np.asarray(coefs, dtype=float)
    if coefs.ndim == 2:
        coefs = coefs[None]
    q, k, _ = coefs.shape
    if q < 1:
        raise ConfigError("companion matrix needs at least one coefficient block")
    B = np.zeros((k * q, k * q))
    B[:k] = np.hstack(list(coefs))
    B[k:, : k * (q - 1)] = np.eye(k * (q - 1))
    return B


def spectral_radius(B) -> float:
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ConfigError(f"spectral radius needs a square matrix, got shape {B.shape}")
    if not np.all(np.isfinite(B)):
        raise NumericalError("matrix has non-finite entries")
    return float(np.max(np.abs(np.linalg.eigvals(B))))


def eigen_adjust(A, threshold: float = EIGEN_THRESHOLD) -> AdjustmentReport:
    """Clamp the singular values of ``A`` at ``threshold``.

    With ``A = U diag(s) W'``, the adjusted matrix is ``U diag(min(s, threshold)) W'``,
    so every eigenvalue of the result is at most ``threshold`` in modulus.
    The matrix is returned untouched when no singular value exceeds the threshold.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ConfigError(f"eigen adjustment needs a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NumericalError("cannot adjust a matrix with non-finite entries")
    U, s, Wt = np.linalg.svd(A)
    eig = np.sort(np.abs(np.linalg.eigvals(A)))[::-1]
    triggered = bool(np.any(s > threshold))
    if not triggered:
        return AdjustmentReport(s, False, A.copy(), 0.0, eig, eig)
    adjusted = (U * np.minimum(s, threshold)) @ Wt
    distortion = float(np.abs(adjusted - A).sum() / np.abs(A).sum())
    adj_eig = np.sort(np.abs(np.linalg.eigvals(adjusted)))[::-1]
    return AdjustmentReport(s, True, adjusted, distortion, eig, adj_eig)


def theoretical_A(phi: float, alpha: float, d: int = 1) -> np.ndarray:
    """VAR(1) coefficient of ``V_t = u_t X_t`` under AR(1) regressors and error."""
    if d < 1:
        raise ConfigError(f"d must be >= 1, got {d}")
    A = np.zeros((d + 1, d + 1))
    A[0, 0] = phi
    A[1:, 0] = alpha * phi
    A[1:, 1:] = phi ** 2 * np.eye(d)
    return A


def theoretical_singular_values(phi: float, alpha: float, d: int = 1) -> np.ndarray:
    """Closed-form singular values of :func:`theoretical_A`, descending."""
    if d < 1:
        raise ConfigError(f"d must be >= 1, got {d}")
    a = phi / 2 * np.sqrt(alpha ** 2 * d + (phi + 1) ** 2)
    b = phi / 2 * np.sqrt(alpha ** 2 * d + (phi - 1) ** 2)
    vals = [abs(a + b), abs(a - b)] + [phi ** 2] * (d - 1)
    return np.sort(np.asarray(vals))[::-1]


def theoretical_eigenvalues(phi: float, d: int = 1) -> np.ndarray:
    """Eigenvalue moduli of :func:`theoretical_A`: ``|phi|`` once, ``phi^2`` d times."""
    return np.sort(np.asarray([abs(phi)] + [phi ** 2] * d))[::-1]
