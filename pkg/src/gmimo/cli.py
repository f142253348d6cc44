"""Command line interface: ``gmimo <experiment> --config <path>``.

Exit codes: 0 on success, 2 for configuration problems, 3 for
numerical failures inside the simulation, 4 when outputs cannot be
written.  Failures print a single machine-readable JSON object to
stdout so wrapping scripts can parse the reason.
"""

import argparse
import json
import sys
from typing import List, Optional

from .config import EXPERIMENTS, ConfigError, parse_config
from .experiments import ComputeError, OutputError, run_scenario
from .version import __version__

__all__ = ["main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmimo",
        description="Run gigantic-MIMO simulation experiments from JSON configs.",
    )
    parser.add_argument("--version", action="version", version=f"gmimo {__version__}")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", required=True, help="path to the JSON scenario file")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument(
            "--threads",
            type=_positive_int,
            default=1,
            help="worker threads for grid evaluation (default: 1)",
        )
    return parser


def _fail(kind: str, exit_code: int, errors: List[str]) -> int:
    print(
        json.dumps(
            {"status": "error", "kind": kind, "exit_code": exit_code, "errors": errors},
            sort_keys=True,
        )
    )
    return exit_code


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)

    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return _fail("config", EXIT_CONFIG, [f"cannot read config {args.config}: {exc}"])

    try:
        config = parse_config(text)
    except ConfigError as exc:
        return _fail("config", EXIT_CONFIG, exc.errors)

    if config.experiment != args.experiment:
        return _fail(
            "config",
            EXIT_CONFIG,
            [
                f"experiment mismatch: config says {config.experiment!r}, "
                f"command line says {args.experiment!r}"
            ],
        )

    try:
        result = run_scenario(config, args.out, threads=args.threads)
    except ComputeError as exc:
        return _fail("numerical", EXIT_NUMERICAL, [str(exc)])
    except OutputError as exc:
        return _fail("io", EXIT_IO, [str(exc)])

    for path in result.paths:
        print(f"wrote {path}")
    print(
        f"ok: {config.experiment} finished in "
        f"{result.manifest['wall_time_s']:.2f} s"
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
