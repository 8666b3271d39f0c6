"""
main.py — Command-line entrypoint for quench-complexity.

Usage:
    python main.py run --config scenario.yaml --out curve.csv
    python main.py figure fig5 --format json --out fig5.json
    python main.py figure --list
    python main.py validate --out report.json
    python main.py expand --config scenario.yaml
    python main.py crossover --config a.yaml --against b.yaml --window 4:8 --shift 8
"""

import argparse
import logging
import sys

from dotenv import load_dotenv
load_dotenv()  # Load .env before any module reads os.getenv()

from config import LOG_LEVEL
from quench_complexity import __version__
from quench_complexity.commands import (
    EXIT_CONFIG_ERROR, EXIT_IO_ERROR, EXIT_NUMERIC_ERROR,
    cmd_crossover, cmd_expand, cmd_figure, cmd_run, cmd_validate,
)
from quench_complexity.complexity_logic import LambdaPolicy
from quench_complexity.errors import NumericalError, QuenchError

logger = logging.getLogger(__name__)


# ──────────────────────────────────────────────
# Argument parser
# ──────────────────────────────────────────────
def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--policy", choices=[p.value for p in LambdaPolicy],
                        help="λ slot policy (default: from the scenario, fixed-initial)")
    parser.add_argument("--grid", metavar="START:END:SAMPLES", help="override the time grid")
    parser.add_argument("--outputs", metavar="KINDS",
                        help="comma-separated subset of total,zero-mode,bounds,modes")


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quench-complexity",
        description="Nielsen complexity of a harmonic chain under sudden quenches.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--quiet", action="store_true", help="only log warnings and errors")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a scenario document")
    run.add_argument("--config", required=True, metavar="PATH")
    _add_output_flags(run)
    _add_scenario_flags(run)
    run.set_defaults(handler=cmd_run)

    figure = sub.add_parser("figure", help="evaluate a figure preset")
    figure.add_argument("figure_id", nargs="?", help="fig1 .. fig11")
    figure.add_argument("--variant", type=int, default=1, help="1-based curve index")
    figure.add_argument("--list", action="store_true", help="list every preset and exit")
    _add_output_flags(figure)
    _add_scenario_flags(figure)
    figure.set_defaults(handler=cmd_figure)

    validate = sub.add_parser("validate", help="run the validation suite")
    validate.add_argument("--profile", default="default", help="tolerance profile")
    validate.add_argument("--out", metavar="PATH", help="report file (default: stdout)")
    validate.set_defaults(handler=cmd_validate)

    expand = sub.add_parser("expand", help="print a2, a4 and a_i0 of a scenario")
    expand.add_argument("--config", required=True, metavar="PATH")
    _add_scenario_flags(expand)
    expand.set_defaults(handler=cmd_expand)

    crossover = sub.add_parser("crossover", help="crossing times between two scenarios")
    crossover.add_argument("--config", required=True, metavar="PATH")
    crossover.add_argument("--against", required=True, metavar="PATH")
    crossover.add_argument("--window", required=True, metavar="START:END")
    crossover.add_argument("--shift", type=float, default=0.0,
                           help="subtracted from the second scenario's times")
    _add_scenario_flags(crossover)
    crossover.set_defaults(handler=cmd_crossover)
    return parser


# ──────────────────────────────────────────────
# Entrypoint
# ──────────────────────────────────────────────
def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.WARNING if args.quiet else getattr(logging, LOG_LEVEL.upper(), logging.INFO),
        format="%(asctime)s  %(levelname)-8s  %(name)s  %(message)s",
        stream=sys.stderr,
        force=True,
    )

    try:
        return args.handler(args)
    except QuenchError as e:
        logger.error("%s", e)
        return EXIT_CONFIG_ERROR
    except OSError as e:
        logger.error("I/O failure: %s", e)
        return EXIT_IO_ERROR
    except NumericalError as e:
        logger.error("Numerical failure: %s", e)
        return EXIT_NUMERIC_ERROR


if __name__ == "__main__":
    sys.exit(main())
