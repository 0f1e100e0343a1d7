"""
Request workloads: seeded Zipf traces, session-log ingestion and popularity
priors (ranks and PLFUA hot sets).
"""
import logging
from collections import Counter
from typing import Iterable, Optional, Union

import numpy as np
from scipy import stats

from app.core.exceptions import InsufficientObjectsError, InvalidParameterError
from app.modules.cache.schemas import ObjectId
from app.modules.workload.schemas import (
    Ingested,
    SessionRecord,
    Synthetic,
    Trace,
    ZipfSpec,
)

logger = logging.getLogger(__name__)


def zipf_pmf(n_objects: int, alpha: float) -> np.ndarray:
    """
    Truncated Zipf probability mass over ranks 1..N.

    Args:
        n_objects: Number of ranks (N >= 1)
        alpha: Zipf exponent (> 0)

    Returns:
        Array p where p[i - 1] = i^-alpha / sum_k k^-alpha

    Raises:
        InvalidParameterError: If N < 1 or alpha <= 0
    """
    if n_objects < 1:
        raise InvalidParameterError(f"n_objects must be >= 1, got {n_objects}")
    if not alpha > 0:
        raise InvalidParameterError(f"alpha must be > 0, got {alpha}")
    weights = np.power(np.arange(1, n_objects + 1, dtype=np.float64), -float(alpha))
    return weights / weights.sum()


def _cumulative(pmf: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(pmf)
    # Rounding can leave the last entry a hair below 1.0
    cdf[-1] = 1.0
    return cdf


def generate(spec: ZipfSpec) -> Trace:
    """
    Draw n_requests i.i.d. Zipf ranks by inverse-CDF lookup.

    The PRNG is numpy's PCG64 seeded through SeedSequence(spec.seed), so
    equal specs always give equal traces. Ids are ranks: 1 is the most
    popular object.
    """
    cdf = _cumulative(zipf_pmf(spec.n_objects, spec.alpha))
    rng = np.random.default_rng(spec.seed)
    uniforms = rng.random(spec.n_requests)
    requests = np.searchsorted(cdf, uniforms, side="right").astype(np.int64) + 1
    np.minimum(requests, spec.n_objects, out=requests)
    return Trace(requests=requests, provenance=Synthetic(spec=spec))


def ingest_sessions(
    records: Iterable[SessionRecord],
    min_duration: int = 60,
    window: tuple[Optional[int], Optional[int]] = (None, None),
    source: str = "<sessions>",
) -> Trace:
    """
    Turn viewing sessions into a request trace.

    Sessions shorter than min_duration seconds, or starting outside
    [window_start, window_end), are dropped. Each surviving session is one
    request, ordered by start time then content id.
    """
    window_start, window_end = window
    kept = [
        record
        for record in records
        if record.duration >= min_duration
        and (window_start is None or record.start >= window_start)
        and (window_end is None or record.start < window_end)
    ]
    kept.sort(key=lambda record: (record.start, record.content))
    logger.info(f"Ingested {len(kept)} qualifying sessions from {source}")
    requests = np.fromiter((record.content for record in kept), dtype=np.int64, count=len(kept))
    return Trace(
        requests=requests,
        provenance=Ingested(source=source, min_duration=min_duration, window=window),
    )


def popularity_ranks(trace: Trace) -> dict[ObjectId, int]:
    """
    Popularity rank of every object in the trace.

    Synthetic traces rank by id (ids are Zipf ranks). Other traces rank by
    descending request count, ties broken by the smaller id.
    """
    if isinstance(trace.provenance, Synthetic):
        return {object_id: object_id for object_id in np.unique(trace.requests).tolist()}
    return {object_id: rank for rank, (object_id, _) in enumerate(by_popularity(trace), start=1)}


def by_popularity(trace: Trace) -> list[tuple[ObjectId, int]]:
    """(object, request count) pairs, most requested first, ties by smaller id."""
    counts = Counter(trace.as_list())
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


def hot_set(source: Union[Trace, ZipfSpec], capacity: int) -> frozenset[ObjectId]:
    """
    The 2 x capacity objects PLFUA admits.

    Args:
        source: A ZipfSpec or a synthetic trace (true top ranks 1..2C), or any
            other trace (2C most requested ids from a counting pre-pass)
        capacity: Cache capacity C

    Raises:
        InsufficientObjectsError: If 2C exceeds the number of distinct objects
    """
    size = 2 * capacity
    spec = source if isinstance(source, ZipfSpec) else None
    if isinstance(source, Trace) and isinstance(source.provenance, Synthetic):
        spec = source.provenance.spec

    if spec is not None:
        if size > spec.n_objects:
            raise InsufficientObjectsError(
                f"hot set of {size} objects (2 x capacity {capacity}) exceeds N={spec.n_objects}"
            )
        return frozenset(range(1, size + 1))

    ranked = by_popularity(source)
    if size > len(ranked):
        raise InsufficientObjectsError(
            f"hot set of {size} objects (2 x capacity {capacity}) exceeds "
            f"{len(ranked)} distinct objects in the trace"
        )
    return frozenset(object_id for object_id, _ in ranked[:size])


def goodness_of_fit(trace: Trace, n_objects: int, alpha: float) -> tuple[float, float]:
    """Chi-square statistic and p-value of the trace's rank counts against zipf_pmf."""
    pmf = zipf_pmf(n_objects, alpha)
    if len(trace) and (trace.requests.min() < 1 or trace.requests.max() > n_objects):
        raise InvalidParameterError(f"trace holds ids outside [1, {n_objects}]")
    observed = np.bincount(trace.requests, minlength=n_objects + 1)[1:]
    expected = pmf * len(trace)
    statistic, p_value = stats.chisquare(observed, expected)
    return float(statistic), float(p_value)
