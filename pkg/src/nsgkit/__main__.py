"""
Command-line entry point for nsgkit.

Usage:
    nsgkit bounds --kind hoeffding --sigma 1,1,1,1 --d 1 --delta 0.01
    nsgkit verify --scenario scenarios/lieb.json
    nsgkit verify --suite cover --seed 7
    nsgkit simulate --rule double --sigma 1 --thresholds 2,4 --n 32 --out path.csv
    nsgkit estimate-constant --target Hoeffding --family rademacher --d 1 --n 4 --delta 0.125
    nsgkit sample --family IsotropicGaussian --d 4 --count 1000 --format csv
    nsgkit cover --d 3 --out cover.json

Exit codes: 0 pass, 1 contract violation, 2 usage or domain error, 3 IO error.
"""
from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd

from . import bounds as bnd
from .config import NsgkitConfig, load_config_or_default, resolve_seed
from .cover import build_half_cover
from .distributions import SeedStream, sample
from .errors import ContractViolation, NsgError, UnstableQuantileWarning, UsageError
from .factory import SamplerFactory
from .martingale import AdaptiveRule, simulate_path, path_to_frame
from .reports import (BoundsReport, ConstantReport, VerifyReport, checks_frame, render_csv,
                      render_json, write_output)
from .runner import run_scenario
from .scenario import SUITE_NAMES, ConstantOptions, RunConfig, RuleModel, SpecModel, load_scenario
from .verify import ConstantScenario, Target, TrialConfig, estimate_constant

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def _ints(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        write_output(text, out)
    else:
        sys.stdout.write(text)


def _spec_from_flags(family: str, d: int, sigma: float):
    return SamplerFactory.create_from_name(family, d, sigma)


# ---------------------------------------------------------------------------
# Subcommands
# Each handler signature: (args, app) -> exit code
# ---------------------------------------------------------------------------

def cmd_bounds(args: argparse.Namespace, app: NsgkitConfig) -> int:
    if args.sigma is not None:
        query = bnd.BoundQuery.from_sigmas(args.sigma, args.d, args.delta, theta=args.theta, c=args.c)
    elif args.sum_sigma_sq is not None:
        query = bnd.BoundQuery(n=args.n or 1, d=args.d, delta=args.delta,
                               sigma_sq_sum=args.sum_sigma_sq, theta=args.theta, c=args.c)
    else:
        raise UsageError("bounds needs --sigma or --sum-sigma-sq")
    inputs = {"n": query.n, "d": query.d, "delta": query.delta,
              "sigma_sq_sum": query.sigma_sq_sum, "c": query.c}
    if args.kind == "fixed":
        report = BoundsReport(kind="fixed", bound=bnd.fixed_theta_bound(query), inputs=inputs,
                              theta=query.theta)
    elif args.kind == "hoeffding":
        theta = bnd.optimal_theta(query) if query.sigma_sq_sum > 0 else None
        report = BoundsReport(kind="hoeffding", bound=bnd.hoeffding_bound(query), inputs=inputs,
                              theta=theta)
    else:
        if args.b is None or args.B is None:
            raise UsageError("the adaptive bound needs --b and --B")
        grid = bnd.build_doubling_grid(args.b, args.B, query.d, query.delta)
        outcome = bnd.adaptive_bound(query.sigma_sq_sum, grid, query.c)
        report = BoundsReport(kind="adaptive", bound=outcome.value, case=outcome.case,
                              inputs=inputs, iota=grid.iota, grid=grid.to_dict())
    if args.format == "csv":
        flat = report.model_dump(exclude={"inputs", "grid"})
        flat.update(report.inputs)
        _emit(render_csv(pd.DataFrame([flat])), args.out)
    else:
        _emit(render_json(report), args.out)
    return EXIT_OK


def _load_run_config(args: argparse.Namespace, app: NsgkitConfig) -> RunConfig:
    if args.scenario:
        try:
            config = load_scenario(args.scenario)
        except FileNotFoundError as exc:
            raise UsageError(str(exc)) from exc
    else:
        config = RunConfig(name="cli", trials=app.run.trials, alpha=app.run.alpha)
    return config.with_overrides(
        trials=args.trials, alpha=args.alpha, threads=args.threads,
        format=args.format, out=args.out, strict=args.strict or None,
    )


def cmd_verify(args: argparse.Namespace, app: NsgkitConfig) -> int:
    config = _load_run_config(args, app)
    config = config.model_copy(update={"seed": resolve_seed(args.seed, config.seed, app)})
    suites = args.suite or config.suites
    result = run_scenario(config, suites, app)
    if config.format == "csv":
        _emit(render_csv(checks_frame(result)), config.out)
    else:
        _emit(render_json(VerifyReport.from_result(result)), config.out)
    if result.errors:
        for err in result.errors:
            logger.error("%s", err)
        return EXIT_USAGE
    if not result.passed:
        for check in result.failed_checks:
            logger.warning("violated: %s (margin %.4g)", check.name, check.margin)
        return EXIT_VIOLATION
    return EXIT_OK


def _rule_from_flags(args: argparse.Namespace) -> AdaptiveRule:
    if args.rule == "constant":
        return AdaptiveRule.constant(args.sigma)
    if args.rule == "double":
        return AdaptiveRule.double_on_threshold(args.sigma, args.thresholds or [])
    return AdaptiveRule.history_norm_scaled(args.floor, args.cap, args.gain)


def cmd_simulate(args: argparse.Namespace, app: NsgkitConfig) -> int:
    seed = resolve_seed(args.seed, None, app)
    base = _spec_from_flags(args.family, args.d, 1.0)
    path = simulate_path(_rule_from_flags(args), base, args.n, SeedStream(seed, args.stream))
    frame = path_to_frame(path)
    if args.format == "json":
        _emit(render_json(frame.to_dict(orient="records")), args.out)
    else:
        _emit(render_csv(frame), args.out)
    return EXIT_OK


def _constant_options(args: argparse.Namespace, config: RunConfig) -> ConstantOptions:
    opts = config.options_for("constant")
    updates = {}
    if args.target:
        updates["target"] = args.target
    if args.family:
        updates["base"] = SpecModel.of(_spec_from_flags(args.family, (args.d or [1])[0], args.sigma))
        if args.family.lower() != "rademacher" and args.d:
            updates["d_values"] = args.d
    elif args.d:
        updates["d_values"] = args.d
    if args.n:
        updates["n_values"] = args.n
    if args.delta:
        updates["deltas"] = args.delta
    if args.rule:
        updates["rule"] = RuleModel.model_validate(_rule_from_flags(args).to_dict())
    for key in ("theta", "b", "B"):
        if getattr(args, key) is not None:
            updates[key] = getattr(args, key)
    return ConstantOptions.model_validate({**opts.model_dump(), **updates})


def cmd_estimate_constant(args: argparse.Namespace, app: NsgkitConfig) -> int:
    config = _load_run_config(args, app)
    opts = _constant_options(args, config)
    trial = TrialConfig(
        trials=config.trials,
        seed=resolve_seed(args.seed, config.seed, app),
        alpha=config.alpha,
        threads=config.threads if config.threads is not None else app.run.threads,
        batch_size=app.run.batch_size,
    )
    scenario = ConstantScenario(
        base=opts.base.to_spec(),
        rule=opts.rule.to_rule(),
        n_values=tuple(opts.n_values),
        d_values=tuple(opts.d_values),
        deltas=tuple(opts.deltas),
        theta=opts.theta,
        b=opts.b,
        B=opts.B,
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", UnstableQuantileWarning)
        estimate = estimate_constant(Target(opts.target), scenario, trial)
    unstable = estimate.unstable or any(issubclass(w.category, UnstableQuantileWarning) for w in caught)
    report = ConstantReport.from_estimate(config.name, estimate)
    if config.format == "csv":
        _emit(render_csv(estimate.to_frame()), config.out)
    else:
        _emit(render_json(report), config.out)
    if unstable and config.strict:
        logger.warning("unstable quantile under --strict")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_sample(args: argparse.Namespace, app: NsgkitConfig) -> int:
    seed = resolve_seed(args.seed, None, app)
    spec = _spec_from_flags(args.family, args.d, args.sigma)
    points = sample(spec, SeedStream(seed, args.stream), args.count)
    frame = pd.DataFrame(points, columns=[f"x_{k + 1}" for k in range(spec.d)])
    if args.format == "json":
        _emit(render_json({"spec": spec.to_dict(), "seed": seed, "samples": points.tolist()}), args.out)
    else:
        _emit(render_csv(frame), args.out)
    return EXIT_OK


def cmd_cover(args: argparse.Namespace, app: NsgkitConfig) -> int:
    seed = resolve_seed(args.seed, None, app)
    cover = build_half_cover(
        args.d, SeedStream(seed, args.d),
        max_rejections=args.max_rejections or app.cover.max_rejections,
        certify_directions=args.test_directions or app.cover.test_directions,
    )
    _emit(cover.to_json() + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="config.yaml to use instead of the project default.")
    common.add_argument("--seed", type=int, help="Seed; falls back to the scenario, NSG_SEED, then config.yaml.")
    common.add_argument("--format", choices=["json", "csv"], help="Report format (default json).")
    common.add_argument("--out", metavar="PATH", help="Write the report here instead of stdout.")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="Log at DEBUG level.")
    verbosity.add_argument("--quiet", action="store_true", help="Log warnings and errors only.")
    return common


def _run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", metavar="PATH", help="Scenario JSON file; flags override its fields.")
    p.add_argument("--trials", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--threads", type=int)
    p.add_argument("--strict", action="store_true", help="Treat unstable quantiles as violations.")


def _rule_flags(p: argparse.ArgumentParser, default: Optional[str]) -> None:
    p.add_argument("--rule", choices=["constant", "double", "history"], default=default)
    p.add_argument("--sigma", type=float, default=1.0, help="Constant sigma, or base sigma for 'double'.")
    p.add_argument("--thresholds", type=_floats)
    p.add_argument("--floor", type=float, default=1.0)
    p.add_argument("--cap", type=float, default=1.0)
    p.add_argument("--gain", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="nsgkit",
        description="Concentration bounds and verification for norm-subGaussian vectors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="Evaluate a concentration bound.")
    p.add_argument("--kind", choices=["fixed", "hoeffding", "adaptive"], default="hoeffding")
    p.add_argument("--sigma", type=_floats, help="Comma-separated sigma_i values.")
    p.add_argument("--sum-sigma-sq", type=float, dest="sum_sigma_sq")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--n", type=int)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--theta", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--B", type=float)
    p.add_argument("--c", type=float, default=1.0)
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("verify", parents=[common], help="Run verification suites.")
    _run_flags(p)
    p.add_argument("--suite", action="append", choices=list(SUITE_NAMES),
                   help="Suite to run; repeat for several. Defaults to the scenario's list.")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("simulate", parents=[common], help="Simulate one martingale path to CSV.")
    _rule_flags(p, "constant")
    p.add_argument("--family", default="rademacher")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stream", type=int, default=0)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("estimate-constant", parents=[common], help="Estimate an absolute constant.")
    _run_flags(p)
    _rule_flags(p, None)
    p.add_argument("--target", choices=[t.value for t in Target])
    p.add_argument("--family")
    p.add_argument("--d", type=_ints)
    p.add_argument("--n", type=_ints)
    p.add_argument("--delta", type=_floats)
    p.add_argument("--theta", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--B", type=float)
    p.set_defaults(handler=cmd_estimate_constant)

    p = sub.add_parser("sample", parents=[common], help="Draw samples of a family.")
    p.add_argument("--family", required=True)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--stream", type=int, default=0)
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("cover", parents=[common], help="Build a 1/2-cover of the unit sphere.")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--max-rejections", type=int, dest="max_rejections")
    p.add_argument("--test-directions", type=int, dest="test_directions")
    p.set_defaults(handler=cmd_cover)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s  %(name)-40s  %(levelname)-8s  %(message)s",
        datefmt="%H:%M:%S",
    )
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger().setLevel(logging.WARNING)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _configure_logging(args)
    app = load_config_or_default(Path(args.config) if args.config else None)
    if args.format is None and hasattr(args, "format"):
        args.format = None if args.command in ("verify", "estimate-constant") else app.output.format
    try:
        return args.handler(args, app)
    except ContractViolation as exc:
        logger.error("contract violation: %s", exc)
        return EXIT_VIOLATION
    except (NsgError, ValueError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
