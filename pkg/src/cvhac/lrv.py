"""Kernel long-run variance estimators, plain and VAR-prewhitened.

A spectral estimate at frequency ``omega`` is

    f(omega) = 1/(2 pi) * n/(n-d-1) * sum_r k(r/m) Gamma(r) exp(-i omega r)

with ``Gamma(r) = (1/n) sum_t U_t U_{t-r}'``. The long-run variance is
``2 pi f(0)``. Prewhitened variants fit a VAR to ``V``, smooth the residuals
and recolor with ``Phi(z) = (I - sum_k A_k z^k)^{-1}`` at ``z = exp(-i omega)``.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError, DataError, SingularMatrixError
from .regress import HacEstimate
from .varfit import BURG, OLS, eigen_adjust, fit_var, spectral_radius, companion, var_residuals

PARZEN = "parzen"
QS = "qs"


def parzen(x):
    x = np.abs(np.asarray(x, dtype=float))
    return np.where(x <= 0.5, 1 - 6 * x ** 2 + 6 * x ** 3, np.where(x <= 1, 2 * (1 - x) ** 3, 0.0))


def qs(x):
    """Quadratic spectral kernel, ``k(0) = 1`` by continuity."""
    x = np.asarray(x, dtype=float)
    z = 6 * np.pi * x / 5
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 3 / z ** 2 * (np.sin(z) / z - np.cos(z))
    # Taylor series where the closed form cancels
    z2 = z ** 2
    series = 1 - z2 / 10 + z2 ** 2 / 280 - z2 ** 3 / 15120 + z2 ** 4 / 1330560
    return np.where(np.abs(z) < 0.25, series, out)


KERNELS = {PARZEN: parzen, QS: qs}


def _kernel(kernel):
    if callable(kernel):
        return kernel
    try:
        return KERNELS[kernel]
    except KeyError:
        raise ConfigError(f"unknown kernel {kernel!r}; choose from {sorted(KERNELS)}") from None


def sample_autocov(V, r: int, n: int = None) -> np.ndarray:
    """``Gamma(r) = (1/n) sum_{t=r}^{len-1} V_t V_{t-r}'``; negative ``r`` gives the transpose."""
    V = np.asarray(V, dtype=float)
    if V.ndim == 1:
        V = V[:, None]
    length = V.shape[0]
    n = length if n is None else n
    if abs(r) >= length:
        raise ConfigError(f"|lag| must be < {length}, got {r}")
    lag = abs(r)
    g = V[lag:].T @ V[: length - lag] / n
    return g if r >= 0 else g.T


def autocovariances(V, max_lag: int, n: int = None) -> np.ndarray:
    """``Gamma(0..max_lag)`` stacked as ``(max_lag+1, k, k)``."""
    V = np.asarray(V, dtype=float)
    if V.ndim == 1:
        V = V[:, None]
    return np.stack([sample_autocov(V, r, n) for r in range(max_lag + 1)])


def _lag_weights(kernel, m, length):
    """Kernel weights ``k(r/m)`` for ``r = 0..length-1``, truncated after the last nonzero one."""
    k = _kernel(kernel)
    w = k(np.arange(length) / m)
    nz = np.flatnonzero(w)
    return w[: nz[-1] + 1] if len(nz) else w[:1]


def smoothed_sum(gammas, weights, omega: float = 0.0) -> np.ndarray:
    """``sum_{|r|<L} w_|r| Gamma(r) exp(-i omega r)`` from one-sided autocovariances."""
    L = len(weights)
    out = weights[0] * gammas[0].astype(complex)
    if L > 1:
        phase = np.exp(-1j * omega * np.arange(1, L))
        pos = np.tensordot(weights[1:] * phase, gammas[1:L], axes=1)
        neg = np.tensordot(weights[1:] * phase.conj(), gammas[1:L].transpose(0, 2, 1), axes=1)
        out = out + pos + neg
    return out


def _dof(n, d):
    if n <= d + 1:
        raise DataError(f"need n > d+1, got n={n}, d={d}")
    return n / (n - d - 1)


def kernel_spectrum(V, kernel=PARZEN, m: float = 1.0, omega: float = 0.0, d: int = None, n: int = None):
    """Kernel spectral density estimate at ``omega`` (complex Hermitian ``k x k``).

    ``n`` is the divisor of the autocovariances and of the degrees-of-freedom
    factor; it defaults to ``len(V)`` and is set to the original sample size
    when ``V`` holds prewhitening residuals. ``d`` defaults to ``k - 1``.
    """
    V = np.asarray(V, dtype=float)
    if V.ndim == 1:
        V = V[:, None]
    if not m > 0:
        raise ConfigError(f"bandwidth must be positive, got {m}")
    n = V.shape[0] if n is None else n
    d = V.shape[1] - 1 if d is None else d
    weights = _lag_weights(kernel, m, V.shape[0])
    gammas = autocovariances(V, len(weights) - 1, n)
    f = _dof(n, d) * smoothed_sum(gammas, weights, omega) / (2 * np.pi)
    return (f + f.conj().T) / 2


def kernel_lrv(V, kernel=QS, m: float = 1.0, d: int = None, n: int = None) -> np.ndarray:
    """``2 pi f(0)``, a real symmetric matrix."""
    return (2 * np.pi * kernel_spectrum(V, kernel, m, 0.0, d, n)).real


def recoloring_filter(coefs, omega: float = 0.0) -> np.ndarray:
    """``Phi(exp(-i omega)) = (I - sum_k A_k exp(-i omega k))^{-1}``."""
    coefs = np.asarray(coefs)
    q, k, _ = coefs.shape
    z = np.exp(-1j * omega * np.arange(1, q + 1))
    M = np.eye(k) - np.tensordot(z, coefs, axes=1)
    try:
        return np.linalg.inv(M)
    except np.linalg.LinAlgError:
        ev = np.linalg.eigvals(M)
        raise SingularMatrixError(
            "I - sum A_k z^k is singular; the VAR filter cannot be inverted",
            eigenvalue=complex(ev[np.argmin(np.abs(ev))]),
        ) from None


def recolor(f_resid, coefs, omega: float = 0.0) -> np.ndarray:
    phi = recoloring_filter(coefs, omega)
    f = phi @ f_resid @ phi.conj().T
    return (f + f.conj().T) / 2


def plugin_bandwidth_qs(V, n: int = None, weights=None) -> float:
    """AR(1) plug-in bandwidth for the QS kernel.

    Each column gets a univariate AR(1) fit ``(rho_a, s2_a)``; then
    ``alpha2 = sum w 4 rho^2 s2^2/(1-rho)^8 / sum w s2^2/(1-rho)^4`` and
    ``m = 1.3221 (alpha2 n)^(1/5)``, floored at 1 and capped at ``n - 1``.
    By default the first (intercept) column gets weight zero.
    """
    V = np.asarray(V, dtype=float)
    if V.ndim == 1:
        V = V[:, None]
    length, k = V.shape
    n = length if n is None else n
    if weights is None:
        weights = np.ones(k)
        if k > 1:
            weights[0] = 0.0
    weights = np.asarray(weights, dtype=float)
    lead, lag = V[1:], V[:-1]
    denom = np.sum(lag ** 2, axis=0)
    if np.any(denom[weights > 0] == 0):
        raise DataError("a weighted column is identically zero; AR(1) plug-in undefined")
    rho = np.divide(np.sum(lead * lag, axis=0), denom, out=np.zeros(k), where=denom > 0)
    if np.any(rho[weights > 0] == 1.0):
        raise SingularMatrixError("AR(1) plug-in coefficient equals one (nonstationary column)")
    s2 = np.mean((lead - rho * lag) ** 2, axis=0)
    num = np.sum(weights * 4 * rho ** 2 * s2 ** 2 / (1 - rho) ** 8)
    den = np.sum(weights * s2 ** 2 / (1 - rho) ** 4)
    alpha2 = num / den if den > 0 else 0.0
    m = 1.3221 * (alpha2 * n) ** 0.2
    return float(min(max(m, 1.0), n - 1))


def prewhiten(V, q: int, fit_method: str = BURG, adjust: bool = False):
    """Fit the prewhitening VAR and return ``(coefs, residuals, model, report)``.

    With ``adjust`` the VAR(1) coefficient is eigen-adjusted and the residuals
    are recomputed from the adjusted matrix.
    """
    model = fit_var(V, q, fit_method)
    report = None
    coefs = model.coefs
    resid = model.residuals
    if adjust:
        if q != 1:
            raise ConfigError("eigen adjustment is only defined for a VAR(1) prewhitener")
        report = eigen_adjust(coefs[0])
        if report.triggered:
            coefs = report.adjusted[None]
            resid = var_residuals(V, coefs)
    return coefs, resid, model, report


def prewhitened_spectrum(V, q: int = 1, m: float = 1.0, omega: float = 0.0, fit_method: str = BURG,
                         adjust: bool = False, kernel=PARZEN) -> np.ndarray:
    """VAR(q)-prewhitened kernel spectral estimate at ``omega``."""
    V = np.asarray(V, dtype=float)
    n, k = V.shape
    coefs, resid, _, _ = prewhiten(V, q, fit_method, adjust)
    f_resid = kernel_spectrum(resid, kernel, m, omega, d=k - 1, n=n)
    return recolor(f_resid, coefs, omega)


def prewhitened_lrv(V, q: int = 1, fit_method: str = OLS, adjust: bool = False, kernel=QS,
                    m: float = None, tag: str = None) -> HacEstimate:
    """Prewhitened LRV with the plug-in bandwidth on the residuals when ``m`` is None.

    ``q = 0`` skips prewhitening and gives the plain kernel estimator.
    """
    V = np.asarray(V, dtype=float)
    n, k = V.shape
    if q == 0:
        bw = plugin_bandwidth_qs(V) if m is None else m
        S = kernel_lrv(V, kernel, bw)
        return HacEstimate(S_hat=(S + S.T) / 2, estimator_tag=tag or "kernel", selected_bandwidth=bw)
    coefs, resid, model, report = prewhiten(V, q, fit_method, adjust)
    bw = plugin_bandwidth_qs(resid, n=len(resid)) if m is None else m
    f_resid = kernel_spectrum(resid, kernel, bw, 0.0, d=k - 1, n=n)
    S = (2 * np.pi * recolor(f_resid, coefs, 0.0)).real
    return HacEstimate(
        S_hat=(S + S.T) / 2,
        estimator_tag=tag or f"{fit_method}-prewhitened",
        selected_order=q,
        selected_bandwidth=bw,
        adjustment_triggered=bool(report.triggered) if report else False,
        prewhitener_spectral_radius=spectral_radius(companion(model.coefs)),
        distortion=report.distortion if report else 0.0,
    )


def estimate_am(V) -> HacEstimate:
    """QS kernel with the AR(1) plug-in bandwidth, no prewhitening."""
    return prewhitened_lrv(V, q=0, kernel=QS, tag="AM")


def estimate_am_pw(V) -> HacEstimate:
    """OLS VAR(1) prewhitening with eigen adjustment, QS kernel, plug-in bandwidth on residuals."""
    return prewhitened_lrv(V, q=1, fit_method=OLS, adjust=True, kernel=QS, tag="AM-PW")


def estimate_am_pw_unadj(V, q: int = 1) -> HacEstimate:
    """As :func:`estimate_am_pw` without eigen adjustment; ``q`` may exceed one."""
    return prewhitened_lrv(V, q=q, fit_method=OLS, adjust=False, kernel=QS, tag="AM-PW-unadj")
