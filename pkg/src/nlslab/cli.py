"""Command-line entry point.

Subcommands: ``thresholds``, ``simulate``, ``sweep-n``, ``scatter``,
``check`` (with optional check-name selectors) and ``checkpoint``
(inspect/convert).  Exit codes: 0 all passed, 1 a check failed, 2 usage or
configuration error, 3 numerical abort (blow-up guard or revival
contamination).
"""

from __future__ import annotations

import argparse
import math
import sys

from .checkpoint import read_checkpoint
from .config import RunConfig, format_float, parse_config, with_overrides
from .dynamics import mass
from .errors import BlowUpError, ConfigError, NlsLabError, RevivalContaminationError
from .experiments import (
    run_almost_conservation_sweep,
    run_checks,
    run_scattering_cauchy,
    run_simulation,
)
from .grid import lebesgue_norm, to_physical
from .reports import Report
from .thresholds import thresholds

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", default=None, help="path to a key = value config file")
    sub.add_argument("--out", default=None, help="write the CSV report here")
    sub.add_argument("--seed", type=int, default=None, help="override the config seed")
    sub.add_argument("--jobs", type=int, default=None, help="parallel sweep jobs")


def _load_config(args: argparse.Namespace) -> RunConfig:
    cfg = parse_config(args.config) if args.config else RunConfig()
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "jobs", None) is not None:
        overrides["jobs"] = args.jobs
    if getattr(args, "out", None) is not None:
        overrides["out"] = args.out
    return with_overrides(cfg, **overrides) if overrides else cfg


def _emit(report: Report, cfg: RunConfig) -> int:
    text = report.render()
    if cfg.out:
        report.write(cfg.out)
        print(f"wrote {cfg.out}")
    else:
        sys.stdout.write(text)
    if report.passed is None or report.passed:
        return EXIT_PASS
    return EXIT_CHECK_FAILED


def _cmd_thresholds(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    d = args.d if args.d is not None else cfg.dimension
    p = args.p if args.p is not None else cfg.p
    report = Report(title="thresholds", columns=["name", "value"], config=cfg)
    if args.k is not None:
        result = thresholds(d=d, p=p, k=args.k)
    elif args.p2 is not None or cfg.p2 is not None:
        p2 = args.p2 if args.p2 is not None else cfg.p2
        result = thresholds(d=d, p1=p, p2=p2)
    else:
        result = thresholds(d=d, p=p)
    for name, value in result.items():
        report.add_row(name, value)
    for name, flag in result.applicability.items():
        report.add_row(f"applicable_{name}", float(flag))
    report.summary["mode"] = result.mode
    for w in result.warnings:
        report.summary.setdefault("warnings", "")
    if result.warnings:
        report.summary["warnings"] = "; ".join(result.warnings)
    if result.growth_exponent_expr:
        report.summary["growth_exponent"] = result.growth_exponent_expr
    report.passed = True
    return _emit(report, cfg)


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    report = run_simulation(cfg)
    return _emit(report, cfg)


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    report = run_almost_conservation_sweep(cfg)
    return _emit(report, cfg)


def _cmd_scatter(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    report = run_scattering_cauchy(cfg)
    return _emit(report, cfg)


def _cmd_check(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    which = tuple(args.names) if args.names else None
    report = run_checks(cfg, which)
    return _emit(report, cfg)


def _cmd_checkpoint(args: argparse.Namespace) -> int:
    if args.action == "inspect":
        field, t = read_checkpoint(args.path)
        g = field.grid
        print(f"grid: d={g.d} n={g.n} L={format_float(g.L)}")
        print(f"t = {format_float(t)}")
        print(f"mass = {format_float(mass(field))}")
        print(f"max_abs = {format_float(lebesgue_norm(to_physical(field), math.inf))}")
        return EXIT_PASS
    if not args.out:
        print("convert requires --out", file=sys.stderr)
        return EXIT_USAGE
    field, t = read_checkpoint(args.path)
    values = field.values.reshape(-1)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("index,real,imag\n")
        for i, v in enumerate(values):
            fh.write(f"{i},{format_float(v.real)},{format_float(v.imag)}\n")
    print(f"wrote {args.out}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlslab", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p_thr = subs.add_parser("thresholds", help="regularity thresholds for the configured exponents")
    _add_common(p_thr)
    p_thr.add_argument("--d", type=int, default=None)
    p_thr.add_argument("--p", type=float, default=None)
    p_thr.add_argument("--p2", type=float, default=None)
    p_thr.add_argument("--k", type=int, default=None)
    p_thr.set_defaults(func=_cmd_thresholds)

    p_sim = subs.add_parser("simulate", help="evolve the configured data and emit diagnostics")
    _add_common(p_sim)
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = subs.add_parser("sweep-n", help="almost-conservation drift against the cutoff")
    _add_common(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_scatter = subs.add_parser("scatter", help="Cauchy differences of the interaction representation")
    _add_common(p_scatter)
    p_scatter.set_defaults(func=_cmd_scatter)

    p_check = subs.add_parser("check", help="inequality check suites")
    _add_common(p_check)
    p_check.add_argument(
        "names",
        nargs="*",
        choices=["bernstein", "sandwich", "dispersive", "morawetz", "commutator"],
        help="subset of checks (default: from config)",
    )
    p_check.set_defaults(func=_cmd_check)

    p_ckpt = subs.add_parser("checkpoint", help="inspect or convert a checkpoint file")
    p_ckpt.add_argument("action", choices=["inspect", "convert"])
    p_ckpt.add_argument("path")
    p_ckpt.add_argument("--out", default=None, help="CSV output for convert")
    p_ckpt.set_defaults(func=_cmd_checkpoint)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_PASS
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BlowUpError, RevivalContaminationError) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except NlsLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
