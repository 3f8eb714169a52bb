"""
Command line entry point.
واجهة سطر الأوامر

    loopsoup giant-cycles --n 100000 --beta 1.5 --replicas 200 --out runs/giant

Every command writes report.json, manifest.json and dist_*.csv under --out.
Exit status: 0 when all hard checks pass, 1 when one fails (or the run
aborts), 2 for invalid parameters.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError

from loopsoup import __version__
from loopsoup.core.errors import LoopsoupError, ParameterError
from loopsoup.core.settings import get_settings
from loopsoup.experiments import COMMANDS
from loopsoup.experiments.runner import execute
from loopsoup.experiments.schemas import ExperimentSpec
from loopsoup.utils.helpers import deep_merge
from loopsoup.utils.logging import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# flag destination -> ExperimentSpec field
_FIELDS = {
    "n": "n",
    "beta": "beta",
    "nu": "nu",
    "theta": "theta",
    "tmax": "t_max",
    "replicas": "replicas",
    "seed": "seed",
    "eps": "eps",
    "rho": "rho",
    "out": "out",
    "jobs": "jobs",
    "poisson": "poisson",
    "backend": "backend",
    "steps": "steps",
    "samples": "samples",
    "k": "k_values",
    "s": "s_values",
    "T": "t_grid",
    "fuzz_ops": "fuzz_ops",
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, help="number of vertices")
    parser.add_argument("--beta", type=float, help="link intensity")
    parser.add_argument("--nu", type=float, help="probability of a cross")
    parser.add_argument("--theta", type=float, help="split acceptance / PD parameter")
    parser.add_argument("--tmax", type=float, help="exploration horizon")
    parser.add_argument("--replicas", type=int)
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--eps", type=float, nargs="+")
    parser.add_argument("--rho", type=float, nargs="+")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--jobs", type=int, help="worker processes (0: one per CPU)")
    parser.add_argument("--poisson", action="store_true", default=None, help="Poisson link counts")
    parser.add_argument("--backend", help="cycle backend (naive or treap)")
    parser.add_argument("--steps", type=int)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--k", type=int, nargs="+", help="k grid")
    parser.add_argument("--s", type=int, nargs="+", help="link-count checkpoints")
    parser.add_argument("--T", type=float, nargs="+", help="time grid")
    parser.add_argument("--fuzz-ops", dest="fuzz_ops", type=int)
    parser.add_argument("--log-level", dest="log_level")
    parser.add_argument("--json-logs", dest="json_logs", action="store_true", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="loopsoup", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, module in COMMANDS.items():
        doc = (module.__doc__ or name).strip().splitlines()[0]
        _add_common(sub.add_parser(name, help=doc, description=doc))
    return parser


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    """Command defaults overlaid with the flags that were given."""
    module = COMMANDS[args.command]
    overrides: dict[str, Any] = {field: getattr(args, flag) for flag, field in _FIELDS.items()}
    values = deep_merge({"seed": get_settings().DEFAULT_SEED, "out": Path(get_settings().OUTPUT_DIR)}, module.DEFAULTS)
    values = deep_merge(values, overrides)
    return ExperimentSpec(name=args.command, **values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(level=args.log_level, json_format=args.json_logs)

    try:
        spec = spec_from_args(args)
        report = execute(COMMANDS[args.command].run, spec)
    except (ValidationError, ParameterError) as exc:
        error_code = getattr(exc, "error_code", "validation_error")
        logger.error("cli.invalid_parameters", command=args.command, error_code=error_code, error=str(exc))
        print(f"loopsoup {args.command}: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LoopsoupError as exc:
        logger.error("cli.run_failed", command=args.command, error_code=exc.error_code, error=str(exc))
        return EXIT_FAILED

    for check in report.checks:
        status = "ok" if check.passed else ("FAIL" if check.hard else "soft-fail")
        print(f"{status:9} {check.name} value={check.value}")
    print(f"{'PASSED' if report.passed else 'FAILED'} {spec.name} -> {spec.out}")
    return EXIT_OK if report.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
