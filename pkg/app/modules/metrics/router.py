# Single-run subcommands: run, scatter
import argparse
import logging
from typing import Optional

from app.core.exceptions import InvalidParameterError
from app.modules.bench.schemas import capacity_for
from app.modules.cache.schemas import ObjectId, Policy
from app.modules.metrics import repository
from app.modules.metrics.service import scatter, simulate, starved_objects, summarize
from app.modules.workload import repository as workload_repository
from app.modules.workload.schemas import Trace
from app.modules.workload.service import hot_set, popularity_ranks

logger = logging.getLogger(__name__)


def _check_size_flags(args: argparse.Namespace) -> None:
    if args.rate is not None and not 0 < args.rate <= 1:
        raise InvalidParameterError(f"--rate must lie in (0, 1], got {args.rate}")
    if args.capacity is not None and args.capacity < 1:
        raise InvalidParameterError(f"--capacity must be >= 1, got {args.capacity}")


def _capacity(args: argparse.Namespace, trace: Trace) -> int:
    """--capacity as given, or floor(--rate x distinct objects in the trace)."""
    if args.capacity is not None:
        return args.capacity
    return capacity_for(args.rate, trace.distinct_count())


def _hot_set(args: argparse.Namespace, trace: Trace, capacity: int) -> Optional[frozenset[ObjectId]]:
    if args.policy is not Policy.PLFUA:
        return None
    if args.hotset_file:
        hot = workload_repository.read_hot_set(args.hotset_file)
        logger.info(f"Loaded hot set of {len(hot)} objects from {args.hotset_file}")
        return hot
    return hot_set(trace, capacity)


def _load(args: argparse.Namespace) -> tuple[Trace, int, Optional[frozenset[ObjectId]]]:
    _check_size_flags(args)
    trace = workload_repository.read_trace(args.trace)
    capacity = _capacity(args, trace)
    return trace, capacity, _hot_set(args, trace, capacity)


def cmd_run(args: argparse.Namespace) -> int:
    """
    Replay a trace file through one policy and write the RunReport JSON.

    Args:
        args: Parsed flags (trace, policy, rate | capacity, report, events, hotset_file)

    Returns:
        Exit code
    """
    trace, capacity, hot = _load(args)
    events, peaks = simulate(trace, args.policy, capacity, hot)
    report = summarize(events, peaks)

    path = repository.write_report(report, args.report)
    if args.events:
        repository.write_events(events, args.events)
        logger.info(f"Wrote {len(events)} access events to {args.events}")

    print(
        f"{args.policy.value} C={capacity}: hits={report.hits} misses={report.misses} "
        f"chr={report.chr:.4f} metadata={report.peak_resident}+{report.peak_parked} -> {path}"
    )
    return 0


def cmd_scatter(args: argparse.Namespace) -> int:
    """
    Write rank-order hit/miss points for a trace file under one policy.

    Args:
        args: Parsed flags (trace, policy, rate | capacity, out, hotset_file)

    Returns:
        Exit code
    """
    trace, capacity, hot = _load(args)
    events, _ = simulate(trace, args.policy, capacity, hot)
    ranks = popularity_ranks(trace)
    points = scatter(events, ranks)
    path = repository.write_scatter(points, args.out)

    starved = starved_objects(events, ranks, max_rank=2 * capacity)
    logger.info(f"{len(starved)} objects ranked <= {2 * capacity} miss persistently under {args.policy.value}")
    print(f"{args.policy.value} C={capacity}: {len(points)} points, {len(starved)} starved objects -> {path}")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--trace", required=True, help="Trace file (one object id per line)")
    parser.add_argument("--policy", type=Policy, choices=list(Policy), required=True, help="Cache policy")
    size = parser.add_mutually_exclusive_group(required=True)
    size.add_argument("--rate", type=float, help="Cache size as a fraction of distinct objects")
    size.add_argument("--capacity", type=int, help="Cache size in objects")
    parser.add_argument("--hotset-file", default=None, help="PLFUA hot set (one id per line)")


def register(subparsers: argparse._SubParsersAction) -> None:
    """Add the single-run subcommands to the CLI."""
    run_parser = subparsers.add_parser("run", help="Simulate one policy over a trace file")
    _add_common(run_parser)
    run_parser.add_argument("--report", required=True, help="RunReport JSON to write")
    run_parser.add_argument("--events", default=None, help="Optional access-event CSV")
    run_parser.set_defaults(handler=cmd_run)

    scatter_parser = subparsers.add_parser("scatter", help="Export rank-order hit/miss points")
    _add_common(scatter_parser)
    scatter_parser.add_argument("--out", required=True, help="Scatter CSV to write")
    scatter_parser.set_defaults(handler=cmd_scatter)
