"""Command-line entry point: generate, ingest, run, scatter and sweep."""
import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import ConfigFileError, InvalidParameterError, SimulatorError
from app.core.logger import setup_logging
from app.modules.bench.router import register as register_bench
from app.modules.metrics.router import register as register_metrics
from app.modules.workload.router import register as register_workload

logger = logging.getLogger("app.main")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cachesim",
        description="Trace-driven LFU / PLFU / PLFUA cache simulator and CPU-timing sweep",
    )
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default=settings.LOG_LEVEL.upper(),
        help="Logging level (default: %(default)s)",
    )
    parser.add_argument("--no-log-file", action="store_true", help="Log to stderr only")

    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    register_workload(subparsers)
    register_metrics(subparsers)
    register_bench(subparsers)
    return parser


def _validation_message(error: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in item['loc']) or 'value'}: {item['msg']}" for item in error.errors()
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse flags, dispatch to a subcommand and translate errors into exit codes.

    Returns:
        0 on success, 2 for invalid parameters or configuration, 1 for any other failure
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(log_level=args.log_level, to_file=False if args.no_log_file else None)

    try:
        return args.handler(args)
    except ValidationError as e:
        logger.error(f"{args.command}: invalid parameters: {_validation_message(e)}")
        return EXIT_USAGE
    except (InvalidParameterError, ConfigFileError) as e:
        logger.error(f"{args.command}: [{e.code}] {e}")
        return EXIT_USAGE
    except SimulatorError as e:
        logger.error(f"{args.command}: [{e.code}] {e}")
        return EXIT_FAILURE
    except OSError as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
