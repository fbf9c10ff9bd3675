"""Command-line interface: fit, forecast, simulate and diagnose subcommands.

Exit codes: 0 success, 1 usage/parse error, 2 data validation error,
3 non-convergence, 4 numeric failure.
"""

import argparse
import csv
import json
import sys

import numpy as np

from . import __version__
from .archive import DataError, load_archive, read_csv, save_archive
from .config import load_config
from .diagnostics import (
    acf,
    acf_band,
    information_criteria,
    ks_normality,
    ljung_box,
    residuals,
)
from .estimation import FitOptions, fit
from .filtering import FilterExplosionError
from .forecasting import forecast
from .inference import confidence_interval, parse_restrictions, wald_test, z_statistic
from .simulation import SimulationRequest, simulate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NO_CONVERGENCE = 3
EXIT_NUMERIC = 4

_DEFAULT_LB_LAGS = (5, 10, 15)


def _fmt(x):
    """Human-report number format: 6 significant digits."""
    return f"{x:.6g}"


def _fit_report(result, cfg, fingerprint, level, lb_lags, restrict_expr):
    spec = result.spec
    names = spec.coef_names(cfg.covariates)
    flat = result.params.to_array()
    lines = []
    out = lines.append
    out(f"positive time series regression fit (ptsr {__version__})")
    out(f"distribution: {spec.family.name}   g1: {spec.g1.kind}   g2: {spec.g2.kind}")
    out(
        f"orders: p={spec.p} q={spec.q} s={spec.s} "
        f"include_x_in_ar={'yes' if spec.include_x_in_ar else 'no'}"
    )
    out(f"observations: {result.n}   fingerprint: {fingerprint['column_hash'][:12]}")
    out(
        f"converged: {'yes' if result.converged else 'NO'} "
        f"after {result.iterations} iterations"
    )
    out("")
    pct = f"{100.0 * level:g}%"
    header = (
        f"{'coef':<12}{'estimate':>12}{'std.err':>12}{'z':>10}"
        f"{'p-value':>12}{pct + ' CI':>28}"
    )
    out(header)
    out("-" * len(header))
    for i, name in enumerate(names):
        if result.has_vcov:
            z, p = z_statistic(result, i)
            lo, hi = confidence_interval(result, i, level)
            out(
                f"{name:<12}{_fmt(flat[i]):>12}{_fmt(result.std_errors[i]):>12}"
                f"{_fmt(z):>10}{_fmt(p):>12}"
                f"{'[' + _fmt(lo) + ', ' + _fmt(hi) + ']':>28}"
            )
        else:
            out(f"{name:<12}{_fmt(flat[i]):>12}{'--':>12}{'--':>10}{'--':>12}{'--':>28}")
    out("")
    ic = information_criteria(result.loglik, spec.n_params, result.n)
    out(f"log-likelihood: {_fmt(result.loglik)}")
    out(f"AIC: {_fmt(ic.aic)}   SIC: {_fmt(ic.sic)}   HQ: {_fmt(ic.hq)}")
    return lines, names


def cmd_fit(args):
    cfg = load_config(args.config)
    spec = cfg.to_spec()
    y, X, fingerprint = read_csv(args.data, cfg.response, cfg.covariates)
    options = FitOptions(
        max_iterations=cfg.max_iterations, g_tol=cfg.g_tol, step_tol=cfg.step_tol
    )
    try:
        result = fit(spec, y, X, options)
    except FilterExplosionError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERIC

    lines, _ = _fit_report(
        result, cfg, fingerprint, args.level, args.lags or _DEFAULT_LB_LAGS, args.restrict
    )

    res = residuals(result, y, X)
    lines.append("")
    lines.append("Ljung-Box on quantile residuals:")
    for lag in args.lags or _DEFAULT_LB_LAGS:
        if lag < result.n:
            lb = ljung_box(res.quantile, lag)
            lines.append(
                f"  l={lag:<3} Q={_fmt(lb.statistic)}  df={lb.df}  p={_fmt(lb.p_value)}"
            )

    if args.restrict:
        names = spec.coef_names(cfg.covariates)
        restriction = parse_restrictions(args.restrict, names)
        w, df, p = wald_test(result, restriction)
        lines.append("")
        lines.append(
            f"Wald test [{args.restrict}]: W={_fmt(w)}  df={df}  p={_fmt(p)}"
        )

    report = "\n".join(lines) + "\n"
    print(report, end="")
    if args.out:
        save_archive(args.out, result, cfg, fingerprint)
        print(f"archive written to {args.out}")
    return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE


def cmd_forecast(args):
    result, cfg, fingerprint = load_archive(args.archive)
    spec = result.spec
    y, X, current = read_csv(args.data, cfg.response, cfg.covariates)
    if current != fingerprint:
        print("warning: data fingerprint differs from the fitted archive", file=sys.stderr)
    X_future = None
    if spec.s > 0:
        if not args.future:
            print("error: --future CSV required when the model has covariates", file=sys.stderr)
            return EXIT_USAGE
        _, X_future, _ = _read_future(args.future, cfg.covariates, args.horizon)
    try:
        res = forecast(result, y, X, X_future=X_future, horizon=args.horizon)
    except FilterExplosionError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERIC

    rows = [("step", "mu_hat")] + [
        (str(i + 1), repr(float(v))) for i, v in enumerate(res.predicted)
    ]
    _write_csv(args.out, rows)
    return EXIT_OK


def _read_future(path, covariates, horizon):
    """Future covariates: same CSV conventions, no response column needed."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        for col in covariates:
            if col not in header:
                raise DataError(f"future CSV is missing column {col!r}")
        idx = [header.index(c) for c in covariates]
        rows = []
        for row_no, row in enumerate(reader, start=1):
            try:
                rows.append([float(row[i]) for i in idx])
            except (ValueError, IndexError):
                raise DataError(f"future CSV row {row_no}: invalid value") from None
    if len(rows) < horizon:
        raise DataError(
            f"future CSV has {len(rows)} rows but horizon is {horizon}"
        )
    X_future = np.array(rows[:horizon])
    return None, X_future, None


def cmd_simulate(args):
    cfg = load_config(args.config)
    spec = cfg.to_spec()
    params = cfg.to_params()
    n = args.n if args.n is not None else cfg.n
    if n is None:
        print("error: series length required (--n or config key n)", file=sys.stderr)
        return EXIT_USAGE
    req = SimulationRequest(
        spec=spec, params=params, n=n, burn_in=cfg.burn_in, seed=args.seed
    )
    try:
        y, X, mu = simulate(req)
    except FilterExplosionError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERIC

    header = ["t", cfg.response, *cfg.covariates]
    if args.with_mu:
        header.append("mu_true")
    rows = [tuple(header)]
    for t in range(n):
        row = [str(t + 1), repr(float(y[t]))]
        row += [repr(float(v)) for v in X[t]]
        if args.with_mu:
            row.append(repr(float(mu[t])))
        rows.append(tuple(row))
    _write_csv(args.out, rows)
    return EXIT_OK


def cmd_diagnose(args):
    result, cfg, fingerprint = load_archive(args.archive)
    y, X, current = read_csv(args.data, cfg.response, cfg.covariates)
    if current != fingerprint:
        print("warning: data fingerprint differs from the fitted archive", file=sys.stderr)

    res = residuals(result, y, X)
    spec = result.spec
    n = result.n
    max_lag = max(args.lags or _DEFAULT_LB_LAGS)
    max_lag = min(max_lag, n - 1)
    rho = acf(res.quantile, max_lag)
    ks_stat, ks_p = ks_normality(res.quantile)
    ic = information_criteria(result.loglik, spec.n_params, n)
    payload = {
        "n": n,
        "loglik": result.loglik,
        "criteria": {"aic": ic.aic, "sic": ic.sic, "hq": ic.hq},
        "residuals": {
            "simple": res.simple.tolist(),
            "quantile": res.quantile.tolist(),
            "clip_count": res.clip_count,
        },
        "acf": {
            "lags": list(range(max_lag + 1)),
            "quantile_residual_acf": rho.tolist(),
            "band": acf_band(n, spec.n_mean_params),
        },
        "ljung_box": {
            str(lag): dict(zip(("statistic", "df", "p_value"), ljung_box(res.quantile, lag)))
            for lag in (args.lags or _DEFAULT_LB_LAGS)
            if lag < n
        },
        "ks_normality": {"statistic": ks_stat, "p_value": ks_p},
    }
    text = json.dumps(payload, indent=1) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return EXIT_OK


def _write_csv(path, rows):
    def emit(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerows(rows)

    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            emit(fh)
    else:
        emit(sys.stdout)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ptsr", description="Positive time series regression models"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="estimate a model from a CSV")
    p_fit.add_argument("--data", required=True)
    p_fit.add_argument("--config", required=True)
    p_fit.add_argument("--out", help="write a fit archive (JSON)")
    p_fit.add_argument("--level", type=float, default=0.95)
    p_fit.add_argument("--lags", type=int, nargs="+")
    p_fit.add_argument("--restrict", help='Wald restriction, e.g. "ar1=0,ma1=0"')
    p_fit.set_defaults(func=cmd_fit)

    p_fc = sub.add_parser("forecast", help="h-step-ahead mean forecast")
    p_fc.add_argument("--archive", required=True)
    p_fc.add_argument("--data", required=True)
    p_fc.add_argument("--future", help="future covariates CSV")
    p_fc.add_argument("--horizon", type=int, required=True)
    p_fc.add_argument("--out")
    p_fc.set_defaults(func=cmd_forecast)

    p_sim = sub.add_parser("simulate", help="generate a synthetic series")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--n", type=int)
    p_sim.add_argument("--seed", type=int)
    p_sim.add_argument("--out")
    p_sim.add_argument("--with-mu", action="store_true", help="include mu_true column")
    p_sim.set_defaults(func=cmd_simulate)

    p_diag = sub.add_parser("diagnose", help="residual diagnostics as JSON")
    p_diag.add_argument("--archive", required=True)
    p_diag.add_argument("--data", required=True)
    p_diag.add_argument("--lags", type=int, nargs="+")
    p_diag.add_argument("--out")
    p_diag.set_defaults(func=cmd_diagnose)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code else EXIT_OK
    try:
        return args.func(args)
    except DataError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except FilterExplosionError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
