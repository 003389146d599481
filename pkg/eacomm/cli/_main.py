from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import Sequence

import optuna

from eacomm import __version__
from eacomm._errors import EnumerationLimitError
from eacomm._errors import InvariantViolation
from eacomm._errors import SchemaError
from eacomm._errors import SolverError
from eacomm.cli._commands import parse_level
from eacomm.cli._commands import run_behavior
from eacomm.cli._commands import run_check
from eacomm.cli._commands import run_classical
from eacomm.cli._commands import run_eval
from eacomm.cli._commands import run_npa
from eacomm.cli._commands import run_optimize
from eacomm.cli._commands import run_strategy
from eacomm.cli._report import report
from eacomm.cli._report import ReportConfig
from eacomm.cli._report import SECTIONS
from eacomm.npa import EA_SCENARIOS
from eacomm.protocol import MEASUREMENT_CLASSES
from eacomm.strategies import STRATEGY_BUILDERS


_logger = optuna.logging.get_logger(__name__)

_LOG_FORMAT = "[%(levelname)1.1s %(asctime)s] %(message)s"
_LEVELS = {0: logging.WARNING, 1: logging.INFO}
_handler: logging.Handler | None = None


def _configure_logging(verbosity: int) -> None:
    global _handler

    root = logging.getLogger("eacomm")
    if _handler is not None:
        root.removeHandler(_handler)
    _handler = logging.StreamHandler()
    _handler.setFormatter(logging.Formatter(_LOG_FORMAT))
    root.addHandler(_handler)
    root.setLevel(_LEVELS.get(verbosity, logging.DEBUG))


def _run_report(args: argparse.Namespace) -> int:
    cfg = ReportConfig.from_yaml(args.config) if args.config is not None else ReportConfig()
    cfg = cfg.merged(
        seed=args.seed,
        restarts=args.restarts,
        npa_level=args.npa_level,
        npa_timeout=args.npa_timeout,
        jobs=args.jobs,
        sections=tuple(args.sections) if args.sections is not None else None,
    )
    return report(cfg, Path(args.out))


def _add_task(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--task", required=True, help="rac, facet, mesd or a path to a functional JSON file."
    )
    parser.add_argument("--num-states", type=int, default=4, help="States of the mesd task.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eacomm",
        description="Simulate, optimize and bound entanglement-assisted communication protocols.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for progress, -vv for debug."
    )
    parser.add_argument("--json", type=Path, help="Also write the result as JSON to this path.")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("eval", help="Evaluate a task on a strategy file.")
    p.add_argument("--strategy", type=Path, required=True)
    p.add_argument("--task", required=True, help="rac, facet, mesd or a functional JSON file.")
    p.set_defaults(handler=run_eval)

    p = commands.add_parser("check", help="Decide whether an EA strategy is adaptive.")
    p.add_argument("--strategy", type=Path, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(handler=run_check)

    p = commands.add_parser("strategy", help="Write one of the explicit constructions.")
    p.add_argument("name", choices=sorted(STRATEGY_BUILDERS))
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--theta", type=float, help="Tilt of na-ea-trit-rac.")
    p.add_argument("--dim", type=int, help="Local dimension of dense-coding.")
    p.add_argument("--measurement-class", choices=MEASUREMENT_CLASSES)
    p.add_argument("--outcome-type", type=int, help="Placement index of facet-qubit-projective.")
    p.set_defaults(handler=run_strategy)

    p = commands.add_parser("optimize", help="Search a strategy class with restarts.")
    _add_task(p)
    p.add_argument("--class", dest="ansatz", required=True, help="Strategy class tag.")
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--local-dims", type=int, nargs=2)
    p.add_argument("--message-dim", type=int)
    p.add_argument("--base-outcomes", type=int)
    p.add_argument("--num-kraus", type=int)
    p.add_argument("--out", type=Path)
    p.set_defaults(handler=run_optimize)

    p = commands.add_parser("npa", help="Bound a task with the NPA hierarchy.")
    _add_task(p)
    p.add_argument("--scenario", choices=sorted(EA_SCENARIOS), default="ea-bit")
    p.add_argument("--level", type=parse_level, default=2, help="Positive integer or 1+AB.")
    p.add_argument("--nonadaptive", action="store_true")
    p.add_argument("--symmetrize", action="store_true")
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--time-limit", type=float)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--export", type=Path, help="Write the SDP in SDPA sparse format.")
    mode.add_argument("--solve", action="store_true", help="Solve with the built-in solver.")
    p.set_defaults(handler=run_npa)

    p = commands.add_parser("classical", help="Brute-force classical bounds.")
    _add_task(p)
    p.add_argument("--message-sizes", type=int, nargs="+", default=[2, 3])
    p.set_defaults(handler=run_classical)

    p = commands.add_parser("behavior", help="Export the behavior of a strategy.")
    p.add_argument("--strategy", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True, help=".csv for CSV, JSON otherwise.")
    p.set_defaults(handler=run_behavior)

    p = commands.add_parser("report", help="Reproduce the resource comparison table.")
    p.add_argument("--out", type=Path, default=Path("report.md"))
    p.add_argument("--config", type=Path, help="YAML file of report settings.")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--npa-level", type=parse_level)
    p.add_argument("--npa-timeout", type=float)
    p.add_argument("--sections", nargs="+", choices=SECTIONS)
    p.set_defaults(handler=_run_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``eacomm`` command; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    _configure_logging(args.verbose)
    try:
        return int(args.handler(args))
    except InvariantViolation as e:
        _logger.error(str(e))
        return 3
    except (SchemaError, EnumerationLimitError, ValueError, OSError) as e:
        _logger.error(str(e))
        return 2
    except SolverError as e:
        _logger.error(str(e))
        return 4
