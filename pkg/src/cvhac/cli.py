"""Command-line entry point: ``cvhac {mc, eigen-analysis, fit, order-sweep}``.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
failure, 1 any other library error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .cvll import CandidateGrid
from .errors import ConfigError, HacError
from .harness.eigen import eigen_analysis_empirical, eigen_analysis_theoretical
from .harness.empirical import fit_csv, order_sweep, read_regression_csv
from .harness.montecarlo import DGPS, McConfig, run_monte_carlo
from .harness.tables import render
from .regress import ESTIMATOR_TAGS

ALIASES = {
    "am": "AM",
    "ampw": "AM-PW",
    "ampw-unadj": "AM-PW-unadj",
    "cvll": "CVLL",
}


def _estimators(text: str) -> tuple:
    """Comma-separated estimator names; ``all`` selects every estimator."""
    out = []
    for token in (t.strip() for t in text.split(",")):
        if not token:
            continue
        if token.lower() == "all":
            out.extend(ESTIMATOR_TAGS)
        elif token.lower() in ALIASES:
            out.append(ALIASES[token.lower()])
        elif token in ESTIMATOR_TAGS:
            out.append(token)
        else:
            raise ConfigError(f"unknown estimator {token!r}; choose from all, {', '.join(ALIASES)}")
    if not out:
        raise ConfigError("no estimator selected")
    return tuple(dict.fromkeys(out))


def _floats(text: str) -> list:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


def _columns(values) -> list:
    return [c.strip() for v in values for c in v.split(",") if c.strip()]


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_mc(args):
    config = McConfig(
        dgp=args.dgp, phi=args.phi, theta=(args.theta1, args.theta2), alpha=args.alpha,
        d=args.d, n=args.n, reps=args.reps, estimators=_estimators(args.estimators),
        target=args.target, seed=args.seed, c=args.c,
    )
    report = run_monte_carlo(config, workers=args.workers)
    _emit(render(report.rows(), args.format), args.out)
    for tag, s in report.summaries.items():
        if s.excluded:
            print(f"# {tag}: {s.excluded} repetition(s) excluded (non-finite estimate)", file=sys.stderr)
        if s.order_counts:
            print(f"# {tag}: selected orders {s.order_counts}, bandwidths {s.bandwidth_counts}", file=sys.stderr)


def cmd_eigen(args):
    phis = _floats(args.phis)
    if args.mode == "theoretical":
        rows = eigen_analysis_theoretical(args.alpha, phis, args.d)
    else:
        rows = eigen_analysis_empirical(args.alpha, phis, args.n, args.reps, args.seed, args.d)
    _emit(render(rows, args.format), args.out)


def cmd_fit(args):
    orders = (args.q,) if args.q else (1, 2)
    bandwidths = (args.m,) if args.m else None
    grid = CandidateGrid(orders=orders, bandwidths=bandwidths, c=args.c)
    result = fit_csv(args.csv, args.y, _columns(args.x), _estimators(args.estimator), grid,
                     null=args.null, q_unadj=args.q or 1)
    _emit(render(result.rows(), args.format), args.out)
    diag = result.diagnostics
    lines = [
        f"n = {result.n}",
        f"OLS VAR(1) |eigenvalues|: {render_vec(diag['ols_eigenvalues'])}",
        f"OLS VAR(1) singular values: {render_vec(diag['ols_singular_values'])}",
        f"eigen adjustment triggered: {'yes' if diag['adjustment_triggered'] else 'no'}"
        f" (relative distortion {100 * diag['adjustment_distortion']:.1f}%)",
        f"Burg VAR(1) |eigenvalues|: {render_vec(diag['burg_eigenvalues'])}",
    ]
    if "cvll_order" in diag:
        lines.append(f"CVLL selection: q = {diag['cvll_order']}, m = {diag['cvll_bandwidth']:g}")
    lines.append("stars: * p<0.05, ** p<0.01, *** p<0.001 (two-sided normal)")
    print("\n".join(lines), file=sys.stderr if args.out is None and args.format == "csv" else sys.stdout)


def render_vec(v) -> str:
    return " ".join(f"{x:.4f}" for x in v)


def cmd_order_sweep(args):
    data = read_regression_csv(args.csv, args.y, _columns(args.x))
    rows = order_sweep(data, args.max_order, args.coef)
    _emit(render(rows, args.format), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvhac", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log excluded CVLL candidates")
    sub = parser.add_subparsers(dest="command", required=True)

    def output_flags(p):
        p.add_argument("--out", help="write the table here instead of stdout")
        p.add_argument("--format", choices=("csv", "md"), default="md")

    p = sub.add_parser("mc", help="Monte Carlo comparison of HAC estimators")
    p.add_argument("--dgp", choices=DGPS, default="ar1")
    p.add_argument("--phi", type=float, default=0.3, help="total AR coefficient, split evenly across lags")
    p.add_argument("--theta1", type=float, default=0.0)
    p.add_argument("--theta2", type=float, default=0.6)
    p.add_argument("--alpha", type=float, default=0.0, help="regressor intercept")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--d", type=int, default=3, help="number of non-constant regressors")
    p.add_argument("--estimators", default="all")
    p.add_argument("--target", type=int, default=1, help="coefficient index (0 is the intercept)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c", type=float, default=0.8, help="CVLL localization exponent")
    p.add_argument("--workers", type=int, default=1)
    output_flags(p)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("eigen-analysis", help="eigen-adjustment trigger and distortion tables")
    p.add_argument("--mode", choices=("theoretical", "empirical"), default="theoretical")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--phis", default="0.3,0.5,0.7,0.9")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    output_flags(p)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("fit", help="regression on a CSV file with HAC standard errors")
    p.add_argument("--csv", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--x", required=True, nargs="+", help="regressor columns (space or comma separated)")
    p.add_argument("--estimator", default="all", help="all, am, ampw, ampw-unadj, cvll (comma separated)")
    p.add_argument("--q", type=int, default=None, help="fix the prewhitening order of CVLL and ampw-unadj")
    p.add_argument("--m", type=float, default=None, help="fix the CVLL bandwidth")
    p.add_argument("--c", type=float, default=0.8, help="CVLL localization exponent")
    p.add_argument("--null", type=float, default=0.0, help="hypothesized coefficient value for the stars")
    output_flags(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("order-sweep", help="standard error across prewhitening orders")
    p.add_argument("--csv", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--x", required=True, nargs="+")
    p.add_argument("--max-order", type=int, default=16)
    p.add_argument("--coef", type=int, default=1, help="coefficient index (0 is the intercept)")
    output_flags(p)
    p.set_defaults(func=cmd_order_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except HacError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
