# Sweep subcommand
import argparse
import logging
from pathlib import Path
from typing import Any

from app.core.exceptions import InvalidParameterError
from app.modules.bench import repository
from app.modules.bench.schemas import GridMetric, SweepConfig, SweepResult, TimingEngine
from app.modules.bench.service import SEED_RULE, default_grid, difference_grids, run_sweep
from app.modules.cache.schemas import Policy
from app.utils.provenance import check_git_status, host_descriptor

logger = logging.getLogger(__name__)


def _policy_list(value: str) -> list[Policy]:
    try:
        return [Policy(name.strip().lower()) for name in value.split(",") if name.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown policy in {value!r}; choose from lfu, plfu, plfua")

def _sweep_config(args: argparse.Namespace) -> SweepConfig:
    """Config file (or the default grid) with command-line overrides applied."""
    config = repository.read_sweep_config(args.config) if args.config else default_grid()
    overrides: dict[str, Any] = {}
    if args.policies:
        overrides["policies"] = args.policies
    if args.max_n is not None:
        overrides["object_counts"] = [n for n in config.object_counts if n <= args.max_n]
    if args.samples is not None:
        overrides["samples_per_case"] = args.samples
    if args.requests is not None:
        overrides["requests_per_sample"] = args.requests
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if args.alpha is not None:
        overrides["alpha"] = args.alpha
    if not overrides:
        return config
    return SweepConfig.model_validate({**config.model_dump(), **overrides})


def _write_artifacts(result: SweepResult, outdir: Path) -> list[str]:
    artifacts = []
    for grids in result.grids.values():
        for grid in grids:
            artifacts.extend(path.name for path in repository.write_grid(grid, outdir))
    for grid in difference_grids(result):
        artifacts.extend(path.name for path in repository.write_grid(grid, outdir))
    artifacts.append(repository.write_runs(result, outdir / "runs.csv").name)
    return artifacts


def _print_summary(result: SweepResult, outdir: Path) -> None:
    config = result.config
    print("=" * 60)
    print(f"Sweep complete: {config.case_count} cases x {config.samples_per_case} samples")
    print(f"Engine: {result.engine.value}  Workers: {result.workers}  Clock: {result.clock}")
    for policy in config.policies:
        chr_grid = result.grid(policy, GridMetric.MEAN_CHR)
        cpu_grid = result.grid(policy, GridMetric.MEAN_CPU_SECONDS)
        cells = [v for row in chr_grid.values for v in row]
        cpu = [v for row in cpu_grid.values for v in row]
        print(
            f"  {policy.value:<6} CHR {min(cells):.4f}..{max(cells):.4f}  "
            f"CPU {min(cpu):.4f}s..{max(cpu):.4f}s"
        )
    if result.flagged_runs:
        print(f"  {result.flagged_runs} runs below the timer resolution threshold")
    print(f"Artifacts: {outdir}")
    print("=" * 60)


def cmd_sweep(args: argparse.Namespace) -> int:
    """
    Run the (N, rate) sweep and write grids, per-run rows and a manifest.

    Args:
        args: Parsed flags (config, outdir, policies, max_n, samples, requests,
            seed, alpha, workers, engine)

    Returns:
        Exit code
    """
    if args.workers is not None and args.workers < 1:
        raise InvalidParameterError(f"--workers must be >= 1, got {args.workers}")
    config = _sweep_config(args)
    outdir = Path(args.outdir)

    result = run_sweep(config, workers=args.workers, engine=args.engine)
    artifacts = _write_artifacts(result, outdir)
    repository.write_manifest(
        result,
        outdir / "manifest.json",
        seed_rule=SEED_RULE,
        host=host_descriptor(),
        revision=check_git_status(),
        artifacts=artifacts,
    )
    logger.info(f"Wrote {len(artifacts)} sweep artifacts to {outdir}")
    _print_summary(result, outdir)
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    """Add the sweep subcommand to the CLI."""
    sweep_parser = subparsers.add_parser("sweep", help="Run the object-count x cache-rate sweep")
    sweep_parser.add_argument("--config", default=None, help="Sweep config JSON (default: built-in 60-case grid)")
    sweep_parser.add_argument("--outdir", required=True, help="Directory for grids, runs.csv and manifest.json")
    sweep_parser.add_argument(
        "--policies",
        action="extend",
        type=_policy_list,
        default=None,
        help="Comma-separated policies to run (lfu,plfu,plfua)",
    )
    sweep_parser.add_argument("--max-n", type=int, default=None, help="Drop object counts above this value")
    sweep_parser.add_argument("--samples", type=int, default=None, help="Samples per case")
    sweep_parser.add_argument("--requests", type=int, default=None, help="Requests per sample")
    sweep_parser.add_argument("--seed", type=int, default=None, help="Base seed")
    sweep_parser.add_argument("--alpha", type=float, default=None, help="Zipf exponent")
    sweep_parser.add_argument("--workers", type=int, default=None, help="Worker threads across cases")
    sweep_parser.add_argument(
        "--engine",
        type=TimingEngine,
        choices=list(TimingEngine),
        default=None,
        help="Engine implementation inside the timed loop",
    )
    sweep_parser.set_defaults(handler=cmd_sweep)
