"""Localized leave-one-out frequency-domain cross-validation.

For each candidate (order ``q``, bandwidth ``m``) the criterion is

    CVLL_c = sum_{j=1}^{F} log det f_{-j}(w_j) + tr[I(w_j) f_{-j}(w_j)^{-1}]

over the first ``F = floor((n/2)^c)`` Fourier frequencies, where ``f_{-j}`` is
the prewhitened Parzen estimate computed from the series with frequency ``j``
removed and ``I`` is the periodogram of the original series. The candidate
with the smallest criterion wins.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError, NumericalError
from .lrv import (PARZEN, _dof, _lag_weights, autocovariances, kernel_spectrum, prewhiten, recolor,
                  recoloring_filter, smoothed_sum)
from .regress import HacEstimate
from .spectral import STANDARD, dft, idft_real, leave_one_out
from .varfit import BURG, companion, fit_var_path, spectral_radius

log = logging.getLogger(__name__)


def max_bandwidth(n: int) -> int:
    """``floor(4 (n/100)^(2/9))``, at least 1."""
    return max(1, _floor(4 * (n / 100) ** (2 / 9)))


def _floor(x: float) -> int:
    # values within rounding error of an integer count as that integer
    r = round(x)
    return int(r) if abs(x - r) < 1e-9 else math.floor(x)


def frequency_count(n: int, c: float = 0.8) -> int:
    """``floor((n/2)^c)``, capped so that ``j`` and ``n - j`` never coincide with 0."""
    if not 0 < c < 1:
        raise ConfigError(f"localization exponent must lie in (0, 1), got {c}")
    if n < 4:
        raise DataError(f"cross-validation needs n >= 4, got {n}")
    return max(1, min(_floor((n / 2) ** c), (n - 1) // 2))


@dataclass
class CandidateGrid:
    orders: tuple = (1, 2)
    bandwidths: tuple = None
    c: float = 0.8
    fit_method: str = BURG
    kernel: str = PARZEN
    variant: str = STANDARD

    def __post_init__(self):
        self.orders = tuple(sorted(set(int(q) for q in self.orders)))
        if not self.orders or min(self.orders) < 1:
            raise ConfigError(f"orders must be a nonempty set of positive integers, got {self.orders}")
        if self.bandwidths is not None:
            self.bandwidths = tuple(sorted(set(self.bandwidths)))
            if not self.bandwidths or min(self.bandwidths) < 1:
                raise ConfigError(f"bandwidths must be a nonempty set of values >= 1, got {self.bandwidths}")
        if not 0 < self.c < 1:
            raise ConfigError(f"localization exponent must lie in (0, 1), got {self.c}")

    def bandwidths_for(self, n: int) -> tuple:
        if self.bandwidths is not None:
            return self.bandwidths
        return tuple(range(1, max_bandwidth(n) + 1))

    def candidates(self, n: int):
        return [(q, m) for q in self.orders for m in self.bandwidths_for(n)]


@dataclass
class CvllScore:
    q: int
    m: float
    score: float
    excluded: bool = False
    reason: str = ""


@dataclass
class Selection:
    q: int
    m: float
    scores: list = field(default_factory=list)

    def score_table(self):
        return {(s.q, s.m): s.score for s in self.scores}


def _logdet_and_trace(f, J_j, n):
    """``log det f`` and ``(n/2pi) J^* f^{-1} J`` through a Hermitian Cholesky factor."""
    L = np.linalg.cholesky(f)
    diag = np.real(np.diag(L))
    if np.any(diag <= 0) or not np.all(np.isfinite(diag)):
        raise np.linalg.LinAlgError("non-positive pivot")
    z = np.linalg.solve(L, J_j)
    return 2 * np.sum(np.log(diag)), n / (2 * np.pi) * float(np.real(np.vdot(z, z)))


def cvll_scores(V, grid: CandidateGrid = None, frequencies=None) -> list:
    """Criterion value for every candidate in ``grid``.

    ``frequencies`` overrides the default ``1..frequency_count(n, c)`` and is
    meant for audits. Candidates whose estimate is not positive definite at
    some frequency, or whose VAR refit fails, are marked excluded.
    """
    grid = grid or CandidateGrid()
    V = np.asarray(V, dtype=float)
    if V.ndim == 1:
        V = V[:, None]
    n, k = V.shape
    d = k - 1
    dof = _dof(n, d)
    bandwidths = grid.bandwidths_for(n)
    if frequencies is None:
        frequencies = range(1, frequency_count(n, grid.c) + 1)
    q_max = max(grid.orders)
    weights = {m: _lag_weights(grid.kernel, m, n - q_max) for m in bandwidths}
    max_lag = max(len(w) for w in weights.values()) - 1

    J = dft(V)
    total = {(q, m): 0.0 for q in grid.orders for m in bandwidths}
    reasons = {}
    for j in frequencies:
        omega = 2 * np.pi * j / n
        V_j = idft_real(leave_one_out(J, j, grid.variant))
        try:
            models = fit_var_path(V_j, q_max, grid.fit_method)
        except (NumericalError, DataError) as exc:
            for key in total:
                reasons.setdefault(key, f"VAR refit failed at j={j}: {exc}")
            continue
        for q in grid.orders:
            if all((q, m) in reasons for m in bandwidths):
                continue
            model = models[q - 1]
            try:
                phi = recoloring_filter(model.coefs, omega)
            except NumericalError as exc:
                for m in bandwidths:
                    reasons.setdefault((q, m), f"recoloring failed at j={j}: {exc}")
                continue
            gammas = autocovariances(model.residuals, min(max_lag, len(model.residuals) - 1), n)
            for m in bandwidths:
                if (q, m) in reasons:
                    continue
                w = weights[m][: len(gammas)]
                f_res = dof * smoothed_sum(gammas, w, omega) / (2 * np.pi)
                f = phi @ f_res @ phi.conj().T
                f = (f + f.conj().T) / 2
                try:
                    logdet, trace = _logdet_and_trace(f, J[j], n)
                except np.linalg.LinAlgError:
                    reasons[(q, m)] = f"spectral estimate not positive definite at j={j}"
                    continue
                total[(q, m)] += logdet + trace
    scores = []
    for (q, m), value in total.items():
        if (q, m) in reasons:
            log.warning("CVLL candidate q=%s m=%s excluded: %s", q, m, reasons[(q, m)])
            scores.append(CvllScore(q, m, float("nan"), True, reasons[(q, m)]))
        else:
            scores.append(CvllScore(q, m, float(value)))
    return scores


def cvll_score(V, q: int, m: float, c: float = 0.8, fit_method: str = BURG) -> CvllScore:
    grid = CandidateGrid(orders=(q,), bandwidths=(m,), c=c, fit_method=fit_method)
    return cvll_scores(V, grid)[0]


def select(V, grid: CandidateGrid = None) -> Selection:
    """Minimize the criterion; ties go to the smallest ``q``, then smallest ``m``."""
    grid = grid or CandidateGrid()
    scores = cvll_scores(V, grid)
    best = None
    for s in sorted(scores, key=lambda s: (s.q, s.m)):
        if s.excluded:
            continue
        if best is None or s.score < best.score:
            best = s
    if best is None:
        detail = "; ".join(f"(q={s.q}, m={s.m}): {s.reason}" for s in scores)
        raise NumericalError(f"every CVLL candidate was excluded: {detail}")
    return Selection(q=best.q, m=best.m, scores=scores)


def estimate_cvll(V, grid: CandidateGrid = None) -> HacEstimate:
    """Select ``(q*, m*)`` and return ``2 pi f(0; q*, m*)`` from the full sample."""
    grid = grid or CandidateGrid()
    V = np.asarray(V, dtype=float)
    sel = select(V, grid)
    coefs, resid, model, _ = prewhiten(V, sel.q, grid.fit_method, adjust=False)
    f_resid = kernel_spectrum(resid, grid.kernel, sel.m, 0.0, d=V.shape[1] - 1, n=V.shape[0])
    S = (2 * np.pi * recolor(f_resid, coefs, 0.0)).real
    return HacEstimate(
        S_hat=(S + S.T) / 2,
        estimator_tag="CVLL",
        selected_order=sel.q,
        selected_bandwidth=sel.m,
        prewhitener_spectral_radius=spectral_radius(companion(model.coefs)),
    )
