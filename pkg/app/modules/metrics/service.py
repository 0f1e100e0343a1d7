"""Run summaries, rank-order scatter data and starvation analysis."""
import logging
from collections import Counter, defaultdict
from typing import Iterable, Optional, Sequence

from app.core.config import settings
from app.core.exceptions import EmptyEventsError, UnknownObjectError
from app.modules.cache.schemas import AccessEvent, MetadataPeaks, ObjectId, Outcome, Policy
from app.modules.cache.service import build_config, new_engine
from app.modules.metrics.schemas import RunReport, ScatterPoint
from app.modules.workload.schemas import Trace
from app.modules.workload.service import by_popularity

logger = logging.getLogger(__name__)


def summarize(events: Sequence[AccessEvent], metadata_peaks: MetadataPeaks) -> RunReport:
    """
    Count hits, misses (compulsory included) and evictions into a RunReport.

    Raises:
        EmptyEventsError: If there are no events
    """
    if not events:
        raise EmptyEventsError("cannot summarize an empty event sequence")
    hits = sum(1 for event in events if event.outcome is Outcome.HIT)
    misses = len(events) - hits
    evictions = sum(1 for event in events if event.evicted is not None)
    return RunReport(
        hits=hits,
        misses=misses,
        chr=hits / len(events),
        peak_resident=metadata_peaks.peak_resident,
        peak_parked=metadata_peaks.peak_parked,
        final_resident=metadata_peaks.final_resident,
        final_parked=metadata_peaks.final_parked,
        evictions=evictions,
    )


def simulate(
    trace: Trace,
    policy: Policy,
    capacity: int,
    hot_set: Optional[Iterable[ObjectId]] = None,
) -> tuple[list[AccessEvent], MetadataPeaks]:
    """Replay a trace through a fresh engine; returns the events and metadata peaks."""
    engine = new_engine(build_config(policy, capacity, hot_set))
    events = engine.replay(trace.as_list())
    logger.debug(f"Replayed {len(events)} requests through {policy.value} (C={capacity})")
    return events, engine.metadata_peaks()


def scatter(events: Iterable[AccessEvent], popularity_ranks: dict[ObjectId, int]) -> list[ScatterPoint]:
    """
    One (rank, occurrence_index, outcome) point per event, ordered by rank
    and then by the object's own request order.

    Raises:
        UnknownObjectError: If an event's object has no rank
    """
    per_object: dict[ObjectId, list[Outcome]] = defaultdict(list)
    for event in events:
        per_object[event.object].append(event.outcome)

    points: list[ScatterPoint] = []
    for object_id in sorted(per_object, key=lambda o: _rank_of(o, popularity_ranks)):
        rank = popularity_ranks[object_id]
        points.extend(
            ScatterPoint(rank=rank, occurrence_index=index, outcome=outcome)
            for index, outcome in enumerate(per_object[object_id], start=1)
        )
    return points


def _rank_of(object_id: ObjectId, popularity_ranks: dict[ObjectId, int]) -> int:
    try:
        return popularity_ranks[object_id]
    except KeyError:
        raise UnknownObjectError(f"object {object_id} has no popularity rank")


def miss_ratios(events: Iterable[AccessEvent]) -> dict[ObjectId, float]:
    """Per-object share of requests that missed."""
    requests: Counter = Counter()
    misses: Counter = Counter()
    for event in events:
        requests[event.object] += 1
        if event.outcome is Outcome.MISS:
            misses[event.object] += 1
    return {object_id: misses[object_id] / count for object_id, count in requests.items()}


def starved_objects(
    events: Iterable[AccessEvent],
    popularity_ranks: dict[ObjectId, int],
    max_rank: int,
    threshold: Optional[float] = None,
) -> list[ObjectId]:
    """
    Objects ranked within max_rank whose miss ratio exceeds the threshold.

    These are the persistently missing popular objects that show up as solid
    miss columns in a rank-order scatter.
    """
    threshold = settings.STARVATION_MISS_RATIO if threshold is None else threshold
    ratios = miss_ratios(events)
    return sorted(
        object_id
        for object_id, ratio in ratios.items()
        if _rank_of(object_id, popularity_ranks) <= max_rank and ratio > threshold
    )


def rank_frequency(trace: Trace) -> list[tuple[int, ObjectId, int, float]]:
    """(rank, object, count, probability) rows in descending popularity."""
    total = len(trace)
    ordered = by_popularity(trace)
    return [
        (rank, object_id, count, count / total)
        for rank, (object_id, count) in enumerate(ordered, start=1)
    ]
