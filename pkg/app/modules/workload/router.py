# Workload subcommands: generate, ingest
import argparse
import logging

from app.core.config import settings
from app.core.exceptions import InvalidParameterError
from app.modules.metrics import repository as metrics_repository
from app.modules.metrics.service import rank_frequency
from app.modules.workload import repository
from app.modules.workload.schemas import ZipfSpec
from app.modules.workload.service import generate, goodness_of_fit, ingest_sessions

logger = logging.getLogger(__name__)


def cmd_generate(args: argparse.Namespace) -> int:
    """
    Generate a seeded Zipf trace file.

    Args:
        args: Parsed flags (n, alpha, requests, seed, out, check)

    Returns:
        Exit code
    """
    spec = ZipfSpec(n_objects=args.n, alpha=args.alpha, n_requests=args.requests, seed=args.seed)
    trace = generate(spec)
    path = repository.write_trace(trace, args.out)
    logger.info(f"Wrote {len(trace)} requests to {path}")

    print(
        f"zipf trace: N={spec.n_objects} alpha={spec.alpha:g} requests={spec.n_requests} "
        f"seed={spec.seed} distinct={trace.distinct_count()} -> {path}"
    )
    if args.check:
        statistic, p_value = goodness_of_fit(trace, spec.n_objects, spec.alpha)
        print(f"chi-square vs zipf pmf: statistic={statistic:.3f} p-value={p_value:.4f}")
    return 0


def cmd_ingest(args: argparse.Namespace) -> int:
    """
    Convert a viewing-session CSV into a trace file.

    Args:
        args: Parsed flags (sessions, out, min_duration, window_start, window_end, ranks)

    Returns:
        Exit code
    """
    if args.min_duration < 0:
        raise InvalidParameterError(f"--min-duration must be >= 0, got {args.min_duration}")
    if (
        args.window_start is not None
        and args.window_end is not None
        and args.window_end <= args.window_start
    ):
        raise InvalidParameterError("--window-end must be after --window-start")

    records = repository.read_sessions(args.sessions)
    trace = ingest_sessions(
        records,
        min_duration=args.min_duration,
        window=(args.window_start, args.window_end),
        source=str(args.sessions),
    )
    path = repository.write_trace(trace, args.out)
    print(
        f"ingested {len(records)} sessions -> {len(trace)} requests over "
        f"{trace.distinct_count()} objects -> {path}"
    )

    if args.ranks:
        ranks_path = metrics_repository.write_rank_frequency(rank_frequency(trace), args.ranks)
        print(f"rank-frequency table -> {ranks_path}")
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    """Add the workload subcommands to the CLI."""
    generate_parser = subparsers.add_parser("generate", help="Generate a seeded Zipf request trace")
    generate_parser.add_argument("--n", type=int, required=True, help="Number of objects N")
    generate_parser.add_argument("--alpha", type=float, default=settings.ZIPF_ALPHA, help="Zipf exponent")
    generate_parser.add_argument(
        "--requests", type=int, default=settings.REQUESTS_PER_SAMPLE, help="Number of requests"
    )
    generate_parser.add_argument("--seed", type=int, default=0, help="PRNG seed (64-bit unsigned)")
    generate_parser.add_argument("--out", required=True, help="Trace file to write")
    generate_parser.add_argument(
        "--check", action="store_true", help="Print a chi-square fit against the Zipf PMF"
    )
    generate_parser.set_defaults(handler=cmd_generate)

    ingest_parser = subparsers.add_parser("ingest", help="Turn a session CSV into a trace")
    ingest_parser.add_argument("--sessions", required=True, help="CSV with header start,end,content_id")
    ingest_parser.add_argument("--out", required=True, help="Trace file to write")
    ingest_parser.add_argument(
        "--min-duration",
        type=int,
        default=settings.MIN_SESSION_SECONDS,
        help="Minimum session length in seconds",
    )
    ingest_parser.add_argument("--window-start", type=int, default=None, help="Earliest session start (inclusive)")
    ingest_parser.add_argument("--window-end", type=int, default=None, help="Latest session start (exclusive)")
    ingest_parser.add_argument("--ranks", default=None, help="Also write a rank-frequency CSV")
    ingest_parser.set_defaults(handler=cmd_ingest)
