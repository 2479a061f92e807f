"""Monte Carlo engine comparing HAC estimators on simulated regressions."""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..cvll import CandidateGrid, estimate_cvll
from ..dgp import ArSpec, MaSpec, make_dataset
from ..errors import ConfigError, HacError
from ..lrv import estimate_am, estimate_am_pw, estimate_am_pw_unadj
from ..regress import ESTIMATOR_TAGS, critical_value, moment_series, ols_fit, sandwich

LEVELS = (0.1, 0.05, 0.01)
DGPS = ("ar1", "ar2", "ar3", "ma2")


@dataclass
class McConfig:
    dgp: str = "ar1"
    phi: float = 0.3
    theta: tuple = (0.0, 0.6)
    alpha: float = 0.0
    d: int = 3
    n: int = 100
    reps: int = 1000
    estimators: tuple = ESTIMATOR_TAGS
    target: int = 1
    seed: int = 0
    c: float = 0.8

    def __post_init__(self):
        self.estimators = tuple(self.estimators)
        self.theta = tuple(self.theta)
        if self.dgp not in DGPS:
            raise ConfigError(f"dgp must be one of {DGPS}, got {self.dgp!r}")
        if self.reps < 2:
            raise ConfigError(f"need at least 2 repetitions, got {self.reps}")
        if not self.estimators:
            raise ConfigError("at least one estimator is required")
        unknown = set(self.estimators) - set(ESTIMATOR_TAGS)
        if unknown:
            raise ConfigError(f"unknown estimators {sorted(unknown)}; choose from {ESTIMATOR_TAGS}")
        if not 0 <= self.target <= self.d:
            raise ConfigError(f"target coefficient index must lie in 0..{self.d}")
        if not 0 < self.c < 1:
            raise ConfigError(f"c must lie in (0, 1), got {self.c}")
        if self.dgp != "ma2":
            self.regressor_spec().check_stationary()

    def regressor_spec(self):
        return self._spec(self.alpha)

    def error_spec(self):
        return self._spec(0.0)

    def _spec(self, intercept):
        if self.dgp == "ma2":
            return MaSpec(self.theta, intercept)
        p = {"ar1": 1, "ar2": 2, "ar3": 3}[self.dgp]
        return ArSpec((self.phi / p,) * p, intercept)


def _estimators(config):
    grid = CandidateGrid(c=config.c)
    table = {
        "AM": estimate_am,
        "AM-PW": estimate_am_pw,
        "AM-PW-unadj": estimate_am_pw_unadj,
        "CVLL": lambda V: estimate_cvll(V, grid),
    }
    return {tag: table[tag] for tag in config.estimators}


def repetition_stream(seed: int, index: int) -> np.random.Generator:
    """Stream for repetition ``index``; independent of scheduling."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def run_repetition(config: McConfig, index: int) -> dict:
    rng = repetition_stream(config.seed, index)
    data = make_dataset([config.regressor_spec()] * config.d, config.error_spec(), config.n, rng)
    fit = ols_fit(data)
    V = moment_series(fit, data.X).V
    t = config.target
    out = {"beta": float(fit.beta_hat[t]), "estimates": {}}
    for tag, estimator in _estimators(config).items():
        try:
            est = estimator(V)
            value = float(sandwich(fit.XtX_over_n, est.S_hat)[t, t])
            record = {
                "value": value,
                "order": est.selected_order,
                "bandwidth": est.selected_bandwidth,
                "triggered": est.adjustment_triggered,
                "distortion": est.distortion,
                "radius": est.prewhitener_spectral_radius,
                "error": "",
            }
        except (HacError, np.linalg.LinAlgError, FloatingPointError) as exc:
            record = {"value": float("nan"), "error": f"{type(exc).__name__}: {exc}"}
        out["estimates"][tag] = record
    return out


def _run_one(args):
    return run_repetition(*args)


@dataclass
class EstimatorSummary:
    tag: str
    bias: float
    variance: float
    mse: float
    coverage: dict
    width95: float
    used: int
    excluded: int
    winsorized: dict = field(default_factory=dict)
    mean_order: float = float("nan")
    order_counts: dict = field(default_factory=dict)
    bandwidth_counts: dict = field(default_factory=dict)
    trigger_rate: float = float("nan")
    mean_distortion: float = float("nan")
    max_radius: float = float("nan")
    errors: list = field(default_factory=list)


@dataclass
class McReport:
    config: McConfig
    true_value: float
    summaries: dict
    betas: np.ndarray
    values: dict

    def rows(self):
        """One flat dict per estimator, keyed like the simulation tables."""
        rows = []
        for tag, s in self.summaries.items():
            row = {
                "dgp": self.config.dgp,
                "phi": self.config.theta if self.config.dgp == "ma2" else self.config.phi,
                "alpha": self.config.alpha,
                "n": self.config.n,
                "true_nvar": self.true_value,
                "estimator": tag,
                "bias": s.bias,
                "variance": s.variance,
                "mse": s.mse,
                "cov90": s.coverage[0.1],
                "cov95": s.coverage[0.05],
                "cov99": s.coverage[0.01],
                "width95": s.width95,
                "used": s.used,
                "excluded": s.excluded,
                "bias_winsorized": s.winsorized.get("bias"),
                "variance_winsorized": s.winsorized.get("variance"),
                "mean_order": s.mean_order,
                "trigger_rate": s.trigger_rate,
                "mean_distortion": s.mean_distortion,
            }
            rows.append(row)
        return rows


def _moments(values, true_value):
    bias = float(np.mean(values) - true_value)
    variance = float(np.var(values))
    mse = float(np.mean((values - true_value) ** 2))
    return bias, variance, mse


def summarize(tag, records, betas, true_value, n) -> EstimatorSummary:
    values = np.array([r["value"] for r in records])
    ok = np.isfinite(values)
    errors = [r["error"] for r in records if r.get("error")]
    if not ok.any():
        nan = float("nan")
        return EstimatorSummary(tag, nan, nan, nan, {a: nan for a in LEVELS}, nan, 0, len(values), errors=errors)
    v = values[ok]
    bias, variance, mse = _moments(v, true_value)
    se = np.sqrt(np.clip(v, 0, None) / n)
    b = betas[ok]
    coverage = {a: float(100 * np.mean(np.abs(b) <= critical_value(a) * se)) for a in LEVELS}
    lo, hi = np.percentile(v, [1, 99])
    wb, wv, wm = _moments(np.clip(v, lo, hi), true_value)
    used = [r for r, good in zip(records, ok) if good]
    summary = EstimatorSummary(
        tag=tag, bias=bias, variance=variance, mse=mse, coverage=coverage,
        width95=float(np.mean(2 * critical_value(0.05) * se)),
        used=int(ok.sum()), excluded=int((~ok).sum()),
        winsorized={"bias": wb, "variance": wv, "mse": wm}, errors=errors,
    )
    orders = [r["order"] for r in used]
    if any(orders):
        summary.mean_order = float(np.mean(orders))
        summary.order_counts = dict(sorted(Counter(orders).items()))
        summary.bandwidth_counts = dict(sorted(Counter(r["bandwidth"] for r in used).items()))
    if tag == "AM-PW":
        summary.trigger_rate = float(100 * np.mean([r["triggered"] for r in used]))
        summary.mean_distortion = float(100 * np.mean([r["distortion"] for r in used]))
    radii = [r["radius"] for r in used if np.isfinite(r["radius"])]
    if radii:
        summary.max_radius = float(max(radii))
    return summary


def run_monte_carlo(config: McConfig, workers: int = 1) -> McReport:
    """Run every repetition and reduce in repetition order.

    The true value of ``n Var(beta_target)`` is ``n`` times the variance of the
    simulated coefficient across repetitions.
    """
    jobs = [(config, i) for i in range(config.reps)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs, chunksize=max(1, math.ceil(len(jobs) / (4 * workers)))))
    else:
        results = [_run_one(job) for job in jobs]
    betas = np.array([r["beta"] for r in results])
    true_value = float(config.n * np.var(betas))
    summaries = {}
    values = {}
    for tag in config.estimators:
        records = [r["estimates"][tag] for r in results]
        values[tag] = np.array([rec["value"] for rec in records])
        summaries[tag] = summarize(tag, records, betas, true_value, config.n)
    return McReport(config=config, true_value=true_value, summaries=summaries, betas=betas, values=values)
