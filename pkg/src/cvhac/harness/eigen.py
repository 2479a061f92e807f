"""How often, and how much, the singular-value clamp alters a prewhitening VAR(1)."""

from __future__ import annotations

import numpy as np

from ..dgp import ArSpec, make_dataset
from ..errors import ConfigError, HacError
from ..lrv import prewhitened_lrv
from ..regress import moment_series, ols_fit, sandwich
from ..varfit import BURG, OLS, burg_var, eigen_adjust, ols_var, theoretical_A, theoretical_singular_values
from .montecarlo import repetition_stream


def eigen_analysis_theoretical(alpha: float = 2.0, phis=(0.3, 0.5, 0.7, 0.9), d: int = 1):
    """Eigenvalues, singular values and clamp distortion (percent) of the population VAR(1) matrix."""
    rows = []
    for phi in phis:
        if not abs(phi) < 1:
            raise ConfigError(f"|phi| must be < 1, got {phi}")
        A = theoretical_A(phi, alpha, d)
        report = eigen_adjust(A)
        rows.append({
            "phi": phi,
            "alpha": alpha,
            "eigenvalues": report.eigenvalues,
            "singular_values": theoretical_singular_values(phi, alpha, d),
            "triggered": report.triggered,
            "distortion": 100 * report.distortion,
        })
    return rows


def _section3_dataset(phi, alpha, n, rng, d=1):
    return make_dataset([ArSpec((phi,), alpha)] * d, ArSpec((phi,)), n, rng)


def eigen_analysis_empirical(alpha: float = 2.0, phis=(0.3, 0.5, 0.7, 0.9), n: int = 500,
                             reps: int = 1000, seed: int = 0, d: int = 1):
    """OLS VAR(1) fitted to simulated moment series; averages over repetitions.

    ``distortion`` is averaged over all repetitions, counting zero when the
    clamp is not triggered. Trigger frequency and distortion are percentages.
    """
    rows = []
    for phi in phis:
        if not abs(phi) < 1:
            raise ConfigError(f"|phi| must be < 1, got {phi}")
        eig = np.zeros((reps, d + 1))
        sv = np.zeros((reps, d + 1))
        triggered = np.zeros(reps, dtype=bool)
        distortion = np.zeros(reps)
        for i in range(reps):
            data = _section3_dataset(phi, alpha, n, repetition_stream(seed, i))
            V = moment_series(ols_fit(data), data.X).V
            report = eigen_adjust(ols_var(V, 1).coefs[0])
            eig[i] = report.eigenvalues
            sv[i] = report.singular_values
            triggered[i] = report.triggered
            distortion[i] = report.distortion
        rows.append({
            "phi": phi,
            "alpha": alpha,
            "eigenvalues": eig.mean(axis=0),
            "singular_values": sv.mean(axis=0),
            "trigger_rate": 100 * triggered.mean(),
            "distortion": 100 * distortion.mean(),
        })
    return rows


EXAMPLE_ONE_METHODS = ("ols-unadj", "ols-adj", "burg")


def example_one(reps: int = 1000, n: int = 200, phi: float = 0.95, alpha: float = 1.0, seed: int = 0):
    """Per-repetition prewhitened QS estimates of ``n Var(beta_hat)[1, 1]`` for one regressor.

    Returns ``{method: {"estimate": array, "max_eig": array}}`` for an OLS
    VAR(1) without and with the clamp and a Burg VAR(1) without it. Failed
    repetitions hold NaN.
    """
    out = {m: {"estimate": np.full(reps, np.nan), "max_eig": np.full(reps, np.nan)} for m in EXAMPLE_ONE_METHODS}
    for i in range(reps):
        data = _section3_dataset(phi, alpha, n, repetition_stream(seed, i))
        fit = ols_fit(data)
        V = moment_series(fit, data.X).V
        for method, fit_method, adjust in (("ols-unadj", OLS, False), ("ols-adj", OLS, True), ("burg", BURG, False)):
            model = ols_var(V, 1) if fit_method == OLS else burg_var(V, 1)
            A = model.coefs[0]
            if adjust:
                A = eigen_adjust(A).adjusted
            out[method]["max_eig"][i] = np.max(np.abs(np.linalg.eigvals(A)))
            try:
                est = prewhitened_lrv(V, 1, fit_method, adjust)
                out[method]["estimate"][i] = sandwich(fit.XtX_over_n, est.S_hat)[1, 1]
            except HacError:
                pass
    return out
