"""Command-line front door.

Subcommands: survival, calibrate, convert, sweep, mc-check, table1.
Output is machine-readable (csv or json-lines) on stdout or to a file.

Exit codes: 0 success, 2 validation error, 3 domain infeasibility
(firm already defaulted, unbracketable calibration target), 4 failed
Monte Carlo agreement check.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from pathlib import Path

from . import calibrate as cal
from . import core, credit, mc, sweep
from .errors import (
    DefaultedFirmError,
    NoBracketError,
    ValidationError,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_STATISTICAL = 4


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _emit(rows: list[dict], fmt: str, out_path: str | None) -> None:
    """Write result rows as CSV or json-lines, atomically when to a file."""
    if fmt == "csv":
        header = list(rows[0].keys())
        lines = [",".join(header)]
        lines += [",".join(_fmt(row[k]) for k in header) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = "".join(json.dumps(row) + "\n" for row in rows)

    if out_path is None:
        sys.stdout.write(text)
        return
    target = Path(out_path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_barrier_flag(text: str) -> core.BarrierSpec:
    try:
        level_s, dt_s = text.split(":")
        return core.BarrierSpec(float(level_s), float(dt_s))
    except ValueError as exc:
        raise ValidationError(f"--barrier expects LEVEL:DT, got {text!r}") from exc


def _firm_params(args) -> core.FirmParams:
    return core.FirmParams(
        V=args.V, K=args.K, T=args.T, r=args.r, D=args.D, sigma=args.sigma
    )


def _add_firm_flags(p: argparse.ArgumentParser) -> None:
    # no hidden defaults: every model-critical input must be explicit
    for name in ("V", "K", "T", "r", "D", "sigma"):
        p.add_argument(f"--{name}", type=float, required=True)


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", choices=["csv", "json-lines"], default="csv")
    p.add_argument("--out", metavar="PATH", default=None)


def cmd_survival(args) -> int:
    params = _firm_params(args)
    barriers = [_parse_barrier_flag(b) for b in args.barrier or []]
    if barriers and (args.B is not None or args.dt is not None):
        raise ValidationError("use either --B/--dt or repeated --barrier, not both")
    if len(barriers) >= 2:
        result = core.composite_survival(params, core.CompositeBarrier(barriers))
    elif len(barriers) == 1:
        result = core.survival_probability(params, barriers[0])
    else:
        if args.B is None or args.dt is None:
            raise ValidationError("provide --B and --dt, or at least one --barrier")
        result = core.survival_probability(params, core.BarrierSpec(args.B, args.dt))
    _emit(
        [
            {
                "probability": result.probability,
                "effective_barrier": result.effective_barrier,
                "branch": result.branch,
            }
        ],
        args.output,
        args.out,
    )
    return EXIT_OK


def cmd_calibrate(args) -> int:
    if args.target_survival is not None:
        target_survival = args.target_survival
    elif args.spread_bps is not None:
        if args.recovery is None:
            raise ValidationError("--spread-bps requires --recovery")
        quote = credit.CreditQuote(args.spread_bps, args.recovery, args.T)
        target_survival = credit.survival_from_spread(quote)
    else:
        raise ValidationError("provide --target-survival or --spread-bps")

    bracket = None
    if args.bracket_lo is not None or args.bracket_hi is not None:
        if args.bracket_lo is None or args.bracket_hi is None:
            raise ValidationError("provide both --bracket-lo and --bracket-hi")
        bracket = (args.bracket_lo, args.bracket_hi)
    config = cal.RootFindConfig(
        abs_tol=args.abs_tol, max_iter=args.max_iter, bracket=bracket
    )

    if args.solve == "firm-value":
        if args.sigma is None:
            raise ValidationError("solving for firm value requires --sigma")
        target = cal.CalibrationTarget(
            target_survival, args.K, args.T, args.r, args.D, sigma=args.sigma
        )
        solved = cal.calibrate_firm_value(target, config)
        achieved = cal.merton_survival(solved, args.sigma, target)
    else:
        if args.V is None:
            raise ValidationError("solving for sigma requires --V")
        target = cal.CalibrationTarget(
            target_survival, args.K, args.T, args.r, args.D, V=args.V
        )
        solved = cal.calibrate_sigma(target, config)
        achieved = cal.merton_survival(args.V, solved, target)
    _emit(
        [
            {
                "solved_for": args.solve,
                "value": solved,
                "target_survival": target_survival,
                "achieved_survival": achieved,
            }
        ],
        args.output,
        args.out,
    )
    return EXIT_OK


def cmd_convert(args) -> int:
    given = [x is not None for x in (args.spread_bps, args.pd, args.survival)]
    if sum(given) != 1:
        raise ValidationError("provide exactly one of --spread-bps, --pd, --survival")
    if args.spread_bps is not None:
        quote = credit.CreditQuote(args.spread_bps, args.recovery, args.tenor)
        row = {
            "spread_bps": args.spread_bps,
            "hazard_rate": credit.hazard_from_spread(quote),
            "pd": credit.pd_from_spread(quote),
            "survival": credit.survival_from_spread(quote),
        }
    elif args.pd is not None:
        row = {
            "pd": args.pd,
            "spread_bps": credit.spread_from_pd(args.pd, args.recovery, args.tenor),
        }
    else:
        row = {
            "survival": args.survival,
            "spread_bps": credit.spread_from_survival(
                args.survival, args.recovery, args.tenor
            ),
        }
    _emit([row], args.output, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    path = Path(args.config)
    if path.exists():
        text = path.read_text()
    elif args.config in ("nonbank.json", "bank.json"):
        text = sweep.fixture_text(args.config)
    else:
        raise ValidationError(f"config file not found: {args.config}")
    configs = sweep.load_config(text)
    results = [sweep.run_sweep(c) for c in configs]
    rows = [
        {
            "starting_spread_bps": r.starting_spread_bps,
            "collateral_fraction": r.collateral_fraction,
            "sigma": r.sigma,
            "survival": r.survival,
            "equiv_spread_bps": r.equiv_spread_bps,
            "delta_spread_bps": r.delta_spread_bps,
        }
        for result in results
        for r in result.rows
    ]
    if args.plot_dir is not None:
        from . import plots

        plots.render_all(results, Path(args.plot_dir))
    _emit(rows, args.output, args.out)
    return EXIT_OK


def cmd_mc_check(args) -> int:
    params = _firm_params(args)
    if args.n_paths < 1:
        raise ValidationError(f"--n-paths must be >= 1, got {args.n_paths}")
    barrier = core.BarrierSpec(args.B, args.dt)
    closed = core.survival_probability(params, barrier).probability
    if args.bridge and barrier.dt > 0 and barrier.B > 0:
        # force continuous-crossing simulation on the discrete grid
        config = mc.McConfig(
            n_paths=args.n_paths,
            seed=args.seed,
            schedules=((barrier.B, mc.monitoring_grid(barrier.dt, params.T)),),
            bridge=True,
        )
    else:
        config = mc.config_for_barrier(params, barrier, args.n_paths, args.seed)
    est = mc.simulate_survival(params, config)
    diff = abs(closed - est.p_hat)
    ratio = diff / est.std_err if est.std_err > 0 else math.inf if diff > 0 else 0.0
    _emit(
        [
            {
                "closed_form": closed,
                "mc_estimate": est.p_hat,
                "std_err": est.std_err,
                "abs_diff": diff,
                "diff_over_se": ratio,
            }
        ],
        args.output,
        args.out,
    )
    return EXIT_OK if diff <= 3.0 * est.std_err else EXIT_STATISTICAL


def cmd_table1(args) -> int:
    rows = [
        {
            "rating": row.rating,
            "cds_spread_bps": row.cds_spread_bps,
            "recovery_pct": row.recovery_pct,
            "sp_5y_pd_bps": row.sp_5y_pd_bps,
            "sp_as_cds_bps": row.sp_as_cds_bps,
        }
        for row in credit.table1_reference()
    ]
    _emit(rows, args.output, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collatrisk",
        description="Structural default analytics: survival under collateralization barriers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("survival", help="closed-form survival probability")
    _add_firm_flags(p)
    p.add_argument("--B", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument(
        "--barrier",
        action="append",
        metavar="LEVEL:DT",
        help="repeatable; two or more trigger the composite model",
    )
    _add_output_flags(p)
    p.set_defaults(func=cmd_survival)

    p = sub.add_parser("calibrate", help="solve firm value or volatility for a quote")
    p.add_argument("--solve", choices=["firm-value", "sigma"], required=True)
    p.add_argument("--target-survival", type=float, default=None)
    p.add_argument("--spread-bps", type=float, default=None)
    p.add_argument("--recovery", type=float, default=None)
    p.add_argument("--K", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--D", type=float, required=True)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--V", type=float, default=None)
    p.add_argument("--abs-tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--bracket-lo", type=float, default=None)
    p.add_argument("--bracket-hi", type=float, default=None)
    _add_output_flags(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("convert", help="spread / default probability conversions")
    p.add_argument("--spread-bps", type=float, default=None)
    p.add_argument("--pd", type=float, default=None)
    p.add_argument("--survival", type=float, default=None)
    p.add_argument("--recovery", type=float, required=True)
    p.add_argument("--tenor", type=float, required=True)
    _add_output_flags(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("sweep", help="run a collateralization sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--plot-dir", default=None, help="also render figures into this directory")
    _add_output_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mc-check", help="compare closed form against the MC oracle")
    _add_firm_flags(p)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--n-paths", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bridge", action="store_true")
    _add_output_flags(p)
    p.set_defaults(func=cmd_mc_check)

    p = sub.add_parser("table1", help="print the built-in rating reference table")
    _add_output_flags(p)
    p.set_defaults(func=cmd_table1)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (DefaultedFirmError, NoBracketError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
