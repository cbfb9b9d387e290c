"""Command-line driver for unruh-pairs.

Subcommands:
    report        verdict, cross term and rates for one parameter point
    scan          the same over a grid of parameters, as CSV
    figure5       Xi / (e^{2 pi x} - 1) against x for a list of sigmas, as CSV
    oracle-check  closed forms against the brute-force oracles

Exit codes: 0 success, 1 failed check, 2 invalid configuration or any
other library error, 3 numerical non-convergence or a branch-boundary sample.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import TypeVar

import yaml
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from src.checks import CheckResult, run_check
from src.config import LOG_LEVEL_ENV, RunConfig, expand_scan, load_config
from src.crossterm import BoundedOnly, FiniteValue
from src.entanglement import verdict
from src.errors import (
    BranchBoundaryError,
    ConfigError,
    DomainError,
    NonConvergenceError,
    UnruhPairsError,
)
from src.models import DELTA_KINDS
from src.oracle import brute_force_cross_term
from src.report_generator import PointResult, ReportGenerator

logger = logging.getLogger("src.cli")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NON_CONVERGENCE = 3

T = TypeVar("T")
R = TypeVar("R")


def configure_logging(verbosity: int) -> None:
    """Route log records through rich; -v gives INFO, -vv DEBUG."""
    if verbosity >= 2:
        level: int | str = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _pool_map(func: Callable[[T], R], items: Iterable[T], jobs: int) -> Iterator[R]:
    """Map in input order, on worker processes when ``jobs > 1``."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        yield from map(func, items)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(func, items)


def _fail(message: str) -> None:
    logger.debug("exiting: %s", message)
    sys.stderr.write(f"unruh-pairs: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, newline="")
        logger.info("wrote %s", out)
    else:
        sys.stdout.write(text)


# ── Evaluation ────────────────────────────────────────────────


def evaluate_point(cfg: RunConfig) -> PointResult:
    """Verdict and rates for one configuration.

    Raises:
        NonConvergenceError: If a cross-term quadrature fails.
    """
    scenario, det_a, det_b = cfg.build()
    report = verdict(scenario, det_a, det_b, cfg.quadrature, coupling=cfg.coupling)
    row = PointResult.from_report(report, scenario, det_a, det_b)
    if cfg.report.with_oracle and scenario.kind not in DELTA_KINDS:
        oracle = brute_force_cross_term(scenario, det_a, det_b, cfg.oracle)
        row.oracle_cross_term = oracle
        term = report.cross_term
        engine = None
        if isinstance(term, BoundedOnly) and term.numeric_value is not None:
            engine = term.numeric_value.value
        elif isinstance(term, FiniteValue):
            engine = term.value
        if engine:
            row.oracle_relative_error = abs(oracle - engine) / abs(engine)
    return row


def _scan_point(cfg: RunConfig) -> PointResult:
    try:
        return evaluate_point(cfg)
    except NonConvergenceError as exc:
        logger.warning("point did not converge: %s", exc)
        scenario, det_a, det_b = cfg.build()
        return PointResult.failed(scenario, det_a, det_b, exc.operation)
    except BranchBoundaryError as exc:
        logger.warning("point sits on a branch boundary: %s", exc)
        scenario, det_a, det_b = cfg.build()
        return PointResult.failed(scenario, det_a, det_b, "branch_boundary")


def _check_job(job: tuple[str, float | None, RunConfig]) -> list[CheckResult]:
    name, tolerance, cfg = job
    return run_check(name, tolerance, cfg.oracle, cfg.quadrature)


# ── Subcommands ───────────────────────────────────────────────


def run_report(cfg: RunConfig, out: str | None = None) -> int:
    """Write the single-point report."""
    row = evaluate_point(cfg)
    _emit(ReportGenerator.point_report(row), out or cfg.output)
    return EXIT_OK


def run_scan(cfg: RunConfig, out: str | None = None, jobs: int = 1) -> int:
    """Evaluate every scan point and write the CSV; exit 3 if any point failed."""
    points = expand_scan(cfg)
    axes = [axis.parameter for axis in cfg.scan.axes]
    logger.info("scanning %d points over %s", len(points), ", ".join(axes))
    rows = list(_pool_map(_scan_point, [p for _, p in points], jobs))
    frame = ReportGenerator.scan_frame(
        axes, [(values, row) for (values, _), row in zip(points, rows, strict=True)]
    )
    _emit(ReportGenerator.to_csv(frame), out or cfg.output)
    failed = sum(row.status != "ok" for row in rows)
    if failed:
        logger.error("%d of %d scan points did not converge", failed, len(rows))
        return EXIT_NON_CONVERGENCE
    return EXIT_OK


def run_figure5(cfg: RunConfig, out: str | None = None) -> int:
    """Write the Xi / (e^{2 pi x} - 1) table."""
    fig = cfg.figure5
    frame = ReportGenerator.figure5_frame(fig.xs(), fig.sigmas)
    _emit(ReportGenerator.to_csv(frame), out or cfg.output)
    return EXIT_OK


def run_oracle_check(
    cfg: RunConfig, out: str | None = None, jobs: int = 1, tolerance: float | None = None
) -> int:
    """Run the selected checks and print the pass/fail table.

    Raises:
        ConfigError: If no check is selected.
    """
    if not cfg.checks:
        raise ConfigError("no checks selected")
    jobs_list = [(name, tolerance, cfg) for name in cfg.checks]
    results = [r for rows in _pool_map(_check_job, jobs_list, jobs) for r in rows]
    _emit(ReportGenerator.check_table(results), out or cfg.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


# ── Entry point ───────────────────────────────────────────────


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run configuration")
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a configuration value (repeatable)",
    )
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(
        prog="unruh-pairs",
        description="Cross terms, response rates and entanglement of accelerated detector pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("report", parents=[common], help="single-point report")
    scan = sub.add_parser("scan", parents=[common], help="parameter scan as CSV")
    scan.add_argument("--jobs", type=int, default=1, help="worker processes")
    sub.add_parser("figure5", parents=[common], help="Xi table as CSV")
    check = sub.add_parser("oracle-check", parents=[common], help="oracle equivalence suite")
    check.add_argument("--jobs", type=int, default=1, help="worker processes")
    check.add_argument("--tolerance", type=float, help="override every check's tolerance")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        cfg = load_config(args.config, args.overrides)
        match args.command:
            case "report":
                return run_report(cfg, args.out)
            case "scan":
                return run_scan(cfg, args.out, args.jobs)
            case "figure5":
                return run_figure5(cfg, args.out)
            case "oracle-check":
                return run_oracle_check(cfg, args.out, args.jobs, args.tolerance)
    except (ConfigError, DomainError, FileNotFoundError, ValidationError, yaml.YAMLError) as exc:
        _fail(f"invalid configuration: {exc}")
        return EXIT_CONFIG
    except NonConvergenceError as exc:
        _fail(f"numerical non-convergence in {exc}")
        return EXIT_NON_CONVERGENCE
    except BranchBoundaryError as exc:
        _fail(f"numerical failure: {exc}")
        return EXIT_NON_CONVERGENCE
    except UnruhPairsError as exc:
        _fail(f"invalid configuration: {exc}")
        return EXIT_CONFIG
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
