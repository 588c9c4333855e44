"""Command line entry point for running scenarios and .cnv scripts."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from novconf.config import NovConfConfig, load_config
from novconf.errors import NovConfError, ParseError, UsageError
from novconf.harness.scenarios import ScenarioParams, list_scenarios, run_scenario
from novconf.harness.script_runner import run_script_file
from novconf.models.report import RunReport
from novconf.models.run_config import ReportFormat, RunConfig
from novconf.tools.report_formatter import render_json, render_text

logger = logging.getLogger("novconf")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _window(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    try:
        if not sep:
            raise ValueError(text)
        return int(lo), int(hi)
    except ValueError:
        msg = f"expected lo:hi, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from None


def _glue_window(argv: list[str]) -> list[str]:
    """Rewrite ``--window LO:HI`` as ``--window=LO:HI``.

    argparse reads a separate ``-3:3`` as an unknown flag.
    """
    glued: list[str] = []
    tokens = iter(argv)
    for token in tokens:
        value = next(tokens, None) if token == "--window" else None
        glued.append(token if value is None else f"{token}={value}")
    return glued


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="novconf",
        description="Exact verification kernel for Novikov conformal algebras",
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # run
    run_parser = subparsers.add_parser("run", help="Run a built-in scenario or a .cnv script")
    run_parser.add_argument("target", help="Scenario name, 'embedding', or 'script'")
    run_parser.add_argument("path", nargs="?", default=None, help="Script path for 'run script'")
    run_parser.add_argument("--config", default=None, help="Path to config YAML")
    run_parser.add_argument("--kmax", type=int, default=None, help="Largest k in the algebra W")
    run_parser.add_argument("--M", type=int, default=None, help="Uniform locality bound")
    run_parser.add_argument("--case", default=None, help="Embedding case: case1, case2, case3")
    run_parser.add_argument("--r", type=int, default=None, help="Derivative order in case1")
    run_parser.add_argument("--p", type=int, default=None, help="Order p")
    run_parser.add_argument("--q", type=int, default=None, help="Order q")
    run_parser.add_argument("--l", type=int, default=None, help="Outer derivative order in case3")
    run_parser.add_argument("--variant", default=None, help="Case-2 variant: f10, f01, df00")
    run_parser.add_argument(
        "--window", type=_window, default=None, help="Index window lo:hi, e.g. -3:3"
    )
    run_parser.add_argument("--smax", type=int, default=None, help="Largest generator derivative")
    run_parser.add_argument("--degree", type=int, default=None, help="Largest multiplier degree")
    run_parser.add_argument(
        "--report", choices=[f.value for f in ReportFormat], default=None, help="Report format"
    )
    run_parser.add_argument("--seed", type=int, default=None, help="Seed for sampled checks")
    run_parser.add_argument("--timing", action="store_true", help="Include elapsed_ms in reports")
    run_parser.add_argument("--log-level", default=None, help="Logging level (default WARNING)")

    # list
    subparsers.add_parser("list", help="List built-in scenarios")

    # schema
    subparsers.add_parser("schema", help="Print the JSON schema of machine-readable reports")
    return parser


def _setup_logging(level: str) -> None:
    logging.basicConfig(
        level=level.upper(),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _pick[T](flag: T | None, default: T) -> T:
    return default if flag is None else flag


def resolve_run_config(args: argparse.Namespace, config: NovConfConfig) -> RunConfig:
    """Flags over configuration values over built-in defaults.

    Raises:
        ValueError: If the combination violates a RunConfig invariant.
    """
    if args.target == "script":
        scenario, script = None, Path(args.path) if args.path else None
        if script is None:
            msg = "'run script' needs a PATH"
            raise UsageError(msg)
    else:
        if args.path is not None:
            msg = f"unexpected argument {args.path!r} after scenario {args.target!r}"
            raise UsageError(msg)
        scenario, script = args.target, None
    return RunConfig(
        scenario=scenario,
        script=script,
        report_format=ReportFormat(_pick(args.report, config.run.report_format)),
        seed=_pick(args.seed, config.run.seed),
        timing=args.timing,
        kmax=_pick(args.kmax, config.run.kmax),
        M=_pick(args.M, config.run.M),
        case=args.case,
        r=args.r,
        p=args.p,
        q=args.q,
        l=args.l,
        variant=args.variant,
        window=args.window,
        s_max=_pick(args.smax, config.windows.s_max),
        degree=_pick(args.degree, config.windows.max_multiplier_degree),
        pad_factor=config.windows.pad_factor,
    )


def execute(run: RunConfig) -> RunReport:
    """Run the resolved configuration and collect its report."""
    params = ScenarioParams.from_run_config(run)
    if run.script is not None:
        return run_script_file(run.script, params)
    assert run.scenario is not None
    reports = run_scenario(run.scenario, params)
    return RunReport(source=run.source, seed=run.seed, scenarios=reports)


def _cmd_run(args: argparse.Namespace) -> int:
    """Run a scenario or script and print its report; the exit code reflects the outcome."""
    try:
        config = load_config(args.config)
    except (FileNotFoundError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    _setup_logging(args.log_level or config.logging.level)

    try:
        run = resolve_run_config(args, config)
        report = execute(run)
    except ParseError as e:
        print(f"Error: {args.path}:{e}", file=sys.stderr)
        return EXIT_USAGE
    except (NovConfError, ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if run.report_format == ReportFormat.JSON:
        sys.stdout.write(render_json(report, timing=run.timing) + "\n")
    else:
        sys.stdout.write(render_text(report, timing=run.timing))
    logger.info("run %s finished: %s", report.source, report.status)
    return EXIT_PASS if report.passed else EXIT_FAIL


def _cmd_list(args: argparse.Namespace) -> int:
    print(list_scenarios())
    return EXIT_PASS


def _cmd_schema(args: argparse.Namespace) -> int:
    schema = RunReport.model_json_schema(mode="serialization")
    print(json.dumps(schema, sort_keys=True, indent=2))
    return EXIT_PASS


def main(argv: list[str] | None = None) -> int:
    """Entry point for the novconf CLI."""
    parser = build_parser()
    args = parser.parse_args(_glue_window(sys.argv[1:] if argv is None else argv))

    if args.command is None:
        parser.print_help()
        return EXIT_PASS

    if args.command == "run":
        return _cmd_run(args)
    if args.command == "list":
        return _cmd_list(args)
    return _cmd_schema(args)


if __name__ == "__main__":
    sys.exit(main())
