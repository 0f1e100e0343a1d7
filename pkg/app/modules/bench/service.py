"""
Sweep harness: the object-count x cache-rate grid, CPU timing of the
management loop and mean / standard-deviation grids per policy.
"""
import logging
import time
from typing import Callable, Iterable, Optional, Union

import numpy as np

from app.core.config import settings
from app.core.exceptions import ClockUnavailableError, SimulatorError, SweepCaseError
from app.jobs.executor import create_executor, run_jobs, shutdown_executor
from app.jobs.registry import SweepCellJob
from app.modules.cache.schemas import ObjectId, Policy
from app.modules.cache.service import build_config, new_engine
from app.modules.metrics.service import summarize
from app.modules.workload.schemas import Trace, ZipfSpec
from app.modules.workload.service import generate, hot_set as build_hot_set
from app.modules.bench.schemas import (
    CaseResult,
    GridMetric,
    SampleRun,
    SweepConfig,
    SweepGrid,
    SweepResult,
    TimedRun,
    TimingEngine,
    capacity_for,
)

logger = logging.getLogger(__name__)

SEED_RULE = (
    "numpy.random.SeedSequence([base_seed, n_objects, round(rate * 1e6), sample_index])"
    ".generate_state(1, uint64)[0]"
)

# (minuend, subtrahend, metric) pairs written next to the per-policy grids
DELTA_GRIDS: list[tuple[Policy, Policy, GridMetric]] = [
    (Policy.PLFU, Policy.LFU, GridMetric.MEAN_CPU_SECONDS),
    (Policy.PLFU, Policy.LFU, GridMetric.MEAN_CHR),
    (Policy.PLFUA, Policy.PLFU, GridMetric.MEAN_CHR),
    (Policy.PLFUA, Policy.PLFU, GridMetric.MEAN_CPU_SECONDS),
    (Policy.PLFU, Policy.PLFUA, GridMetric.MEAN_CPU_SECONDS),
    (Policy.LFU, Policy.PLFUA, GridMetric.MEAN_CPU_SECONDS),
]


def _log_spaced(start: float, stop: float, count: int) -> np.ndarray:
    return np.logspace(np.log10(start), np.log10(stop), count)


def default_grid() -> SweepConfig:
    """
    The 60-case grid: 10 object counts log-spaced over 100..100,000 and 6
    cache rates log-spaced over 2%..25%, with settings-driven sample counts.
    """
    object_counts = [int(round(n)) for n in _log_spaced(100, 100_000, 10)]
    rates = [round(float(r), 6) for r in _log_spaced(0.02, 0.25, 6)]
    return SweepConfig(
        object_counts=object_counts,
        rates=rates,
        policies=list(Policy),
        samples_per_case=settings.SAMPLES_PER_CASE,
        requests_per_sample=settings.REQUESTS_PER_SAMPLE,
        alpha=settings.ZIPF_ALPHA,
        base_seed=settings.BASE_SEED,
    )


def derive_seed(base_seed: int, n_objects: int, rate: float, sample_index: int) -> int:
    """Trace seed of one sample, a pure function of the case coordinates."""
    sequence = np.random.SeedSequence([base_seed, n_objects, int(round(rate * 1_000_000)), sample_index])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def cpu_clock() -> tuple[str, Callable[[], float], float]:
    """
    The CPU clock used for timing: per-thread where available, else process.

    Returns:
        (clock name, clock function, resolution in seconds)

    Raises:
        ClockUnavailableError: If neither clock is usable
    """
    for name, clock in (("thread_time", getattr(time, "thread_time", None)), ("process_time", time.process_time)):
        if clock is None:
            continue
        try:
            clock()
            return name, clock, time.get_clock_info(name).resolution
        except (OSError, ValueError) as e:
            logger.warning(f"CPU clock {name} unavailable: {e}")
    raise ClockUnavailableError("no per-thread or per-process CPU clock available")


def timed_run(
    policy: Policy,
    trace: Trace,
    capacity: int,
    hot_set: Optional[Iterable[ObjectId]] = None,
    engine: Union[TimingEngine, str, None] = None,
) -> TimedRun:
    """
    Replay a trace and measure the CPU time of the access loop alone.

    Engine construction, materializing the request list and summarizing the
    events all happen outside the measured interval.

    Args:
        policy: Cache policy
        trace: Pre-generated trace
        capacity: Cache capacity (>= 1)
        hot_set: Admission set, required for PLFUA
        engine: "optimized" or "reference" (defaults to TIMING_ENGINE)

    Returns:
        TimedRun with the RunReport, cpu_seconds, clock name and a flag telling
        whether cpu_seconds cleared TIMER_RESOLUTION_FACTOR x clock resolution
    """
    implementation = TimingEngine(engine or settings.TIMING_ENGINE)
    cache = new_engine(build_config(policy, capacity, hot_set), implementation.value)
    requests = trace.as_list()
    clock_name, clock, resolution = cpu_clock()

    replay = cache.replay
    started = clock()
    events = replay(requests)
    cpu_seconds = clock() - started

    report = summarize(events, cache.metadata_peaks())
    resolution_ok = cpu_seconds >= settings.TIMER_RESOLUTION_FACTOR * resolution
    if not resolution_ok:
        logger.warning(
            f"{policy.value} C={capacity}: {cpu_seconds:.6f}s is within "
            f"{settings.TIMER_RESOLUTION_FACTOR:g}x of the {clock_name} resolution ({resolution:g}s)"
        )
    return TimedRun(report=report, cpu_seconds=max(cpu_seconds, 0.0), clock=clock_name, resolution_ok=resolution_ok)


def build_jobs(config: SweepConfig) -> list[SweepCellJob]:
    """One job per (N, rate) case, seeds derived from the case coordinates."""
    jobs = []
    for n_objects in config.object_counts:
        for rate in config.rates:
            jobs.append(
                SweepCellJob(
                    n_objects=n_objects,
                    rate=rate,
                    capacity=capacity_for(rate, n_objects),
                    seeds=tuple(
                        derive_seed(config.base_seed, n_objects, rate, sample)
                        for sample in range(config.samples_per_case)
                    ),
                    job_id=f"case_{n_objects}_{rate:.6f}",
                    name=f"N={n_objects} rate={rate:.2%}",
                )
            )
    return jobs


def run_case(job: SweepCellJob, config: SweepConfig, engine: TimingEngine) -> CaseResult:
    """
    Run every policy on every sample of one case.

    Each sample trace is generated once and fed to all policies, so the
    policies within a case see byte-identical requests.

    Raises:
        SweepCaseError: Wrapping any failure, with the case coordinates
    """
    samples: list[SampleRun] = []
    try:
        for sample, seed in enumerate(job.seeds):
            spec = ZipfSpec(
                n_objects=job.n_objects,
                alpha=config.alpha,
                n_requests=config.requests_per_sample,
                seed=seed,
            )
            trace = generate(spec)
            for policy in config.policies:
                hot = build_hot_set(trace, job.capacity) if policy is Policy.PLFUA else None
                run = timed_run(policy, trace, job.capacity, hot, engine)
                samples.append(SampleRun(sample=sample, seed=seed, policy=policy, run=run))
    except (SimulatorError, ValueError) as e:
        raise SweepCaseError(job.n_objects, job.rate, e) from e
    return CaseResult(n_objects=job.n_objects, rate=job.rate, capacity=job.capacity, samples=samples)


def _metric_values(runs: list[SampleRun], metric: GridMetric) -> np.ndarray:
    if metric is GridMetric.MEAN_CHR:
        return np.array([s.run.report.chr for s in runs], dtype=np.float64)
    if metric is GridMetric.MEAN_CPU_SECONDS:
        return np.array([s.run.cpu_seconds for s in runs], dtype=np.float64)
    if metric is GridMetric.MEAN_EVICTIONS:
        return np.array([s.run.report.evictions for s in runs], dtype=np.float64)
    return np.array([s.run.report.peak_metadata for s in runs], dtype=np.float64)


def _grid(
    config: SweepConfig,
    cases: list[CaseResult],
    metric: GridMetric,
    cell_values: Callable[[CaseResult], np.ndarray],
    label: str,
    delta: bool = False,
) -> SweepGrid:
    by_coordinates = {(case.n_objects, case.rate): case for case in cases}
    means = np.zeros((len(config.object_counts), len(config.rates)))
    stddevs = np.zeros_like(means)
    for i, n_objects in enumerate(config.object_counts):
        for j, rate in enumerate(config.rates):
            values = cell_values(by_coordinates[(n_objects, rate)])
            means[i, j] = values.mean()
            stddevs[i, j] = values.std()
    if metric is GridMetric.MEAN_CHR and not delta:
        np.clip(means, 0.0, 1.0, out=means)
    return SweepGrid(
        metric=metric,
        label=label,
        delta=delta,
        rows=list(config.object_counts),
        cols=list(config.rates),
        values=means.tolist(),
        per_cell_stddev=stddevs.tolist(),
    )


def aggregate(config: SweepConfig, cases: list[CaseResult]) -> dict[Policy, list[SweepGrid]]:
    """Mean and population standard deviation per cell, per policy and metric."""
    grids: dict[Policy, list[SweepGrid]] = {}
    for policy in config.policies:
        grids[policy] = [
            _grid(
                config,
                cases,
                metric,
                lambda case, p=policy, m=metric: _metric_values(case.runs_for(p), m),
                label=f"{policy.value}_{metric.value}",
            )
            for metric in GridMetric
        ]
    return grids


def difference_grid(result: SweepResult, minuend: Policy, subtrahend: Policy, metric: GridMetric) -> SweepGrid:
    """
    Per-cell mean of paired sample differences (minuend - subtrahend).

    Samples are paired by index; both policies consumed the same trace.
    """

    def paired(case: CaseResult) -> np.ndarray:
        a = _metric_values(sorted(case.runs_for(minuend), key=lambda s: s.sample), metric)
        b = _metric_values(sorted(case.runs_for(subtrahend), key=lambda s: s.sample), metric)
        return a - b

    return _grid(
        result.config,
        result.cases,
        metric,
        paired,
        label=f"delta_{minuend.value}_{subtrahend.value}_{metric.value}",
        delta=True,
    )


def difference_grids(result: SweepResult) -> list[SweepGrid]:
    """Every DELTA_GRIDS entry whose two policies took part in the sweep."""
    present = set(result.config.policies)
    return [
        difference_grid(result, a, b, metric)
        for a, b, metric in DELTA_GRIDS
        if a in present and b in present
    ]


def run_sweep(
    config: SweepConfig,
    workers: Optional[int] = None,
    engine: Union[TimingEngine, str, None] = None,
) -> SweepResult:
    """
    Run the whole grid and aggregate it.

    Args:
        config: Sweep grid and sampling parameters
        workers: Worker threads across cases (defaults to SWEEP_WORKERS; 1 is
            sequential, the most faithful timing mode)
        engine: Engine implementation inside timed loops

    Returns:
        SweepResult with per-case runs and a grid list per policy
    """
    implementation = TimingEngine(engine or settings.TIMING_ENGINE)
    workers = workers or settings.SWEEP_WORKERS
    jobs = build_jobs(config)
    logger.info(
        f"Sweep: {len(jobs)} cases x {config.samples_per_case} samples x "
        f"{len(config.policies)} policies, engine={implementation.value}, workers={workers}"
    )

    executor = create_executor(workers)
    try:
        cases = run_jobs(lambda job: run_case(job, config, implementation), jobs, executor)
    finally:
        shutdown_executor(executor)

    flagged = sum(1 for case in cases for s in case.samples if not s.run.resolution_ok)
    if flagged:
        logger.warning(f"{flagged} timed runs did not clear the timer resolution check")

    clocks = {s.run.clock for case in cases for s in case.samples}
    return SweepResult(
        config=config,
        engine=implementation,
        workers=workers,
        cases=cases,
        grids=aggregate(config, cases),
        flagged_runs=flagged,
        clock=",".join(sorted(clocks)) or None,
    )
