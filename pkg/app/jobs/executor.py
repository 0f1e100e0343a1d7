from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Optional, TypeVar
import logging

from app.core.config import settings
from app.jobs.registry import SweepCellJob

logger = logging.getLogger(__name__)

R = TypeVar("R")


def create_executor(workers: Optional[int] = None) -> Optional[ThreadPoolExecutor]:
    """
    Create the worker pool for sweep jobs.

    Args:
        workers: Number of worker threads (defaults to SWEEP_WORKERS)

    Returns:
        ThreadPoolExecutor, or None when jobs should run sequentially
    """
    workers = workers or settings.SWEEP_WORKERS
    if workers <= 1:
        logger.info("Sweep jobs run sequentially on the calling thread")
        return None

    executor = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="sweep")
    logger.info(f"Executor created with {workers} worker threads")
    return executor


def run_jobs(
    func: Callable[[SweepCellJob], R],
    jobs: list[SweepCellJob],
    executor: Optional[ThreadPoolExecutor] = None,
) -> list[R]:
    """
    Run every job and return results in job order.

    Args:
        func: Callable executed once per job
        jobs: Job specifications
        executor: Pool from create_executor(), or None for sequential execution

    Raises:
        Exception: The first job failure, after the remaining jobs are cancelled
    """
    if executor is None:
        results = []
        for index, job in enumerate(jobs, 1):
            logger.info(f"[{index}/{len(jobs)}] Running job: {job.name} (ID: {job.job_id})")
            results.append(func(job))
        return results

    futures = {executor.submit(func, job): position for position, job in enumerate(jobs)}
    ordered: list[Optional[R]] = [None] * len(jobs)
    done = 0
    try:
        for future in as_completed(futures):
            position = futures[future]
            ordered[position] = future.result()
            done += 1
            logger.info(f"[{done}/{len(jobs)}] Completed job: {jobs[position].name}")
    except Exception:
        for future in futures:
            future.cancel()
        raise
    return ordered  # type: ignore[return-value]


def shutdown_executor(executor: Optional[ThreadPoolExecutor]) -> None:
    """
    Shutdown the executor gracefully.

    Args:
        executor: Pool from create_executor(), or None
    """
    if executor is None:
        return
    executor.shutdown(wait=True)
    logger.info("Executor shutdown complete")
