"""
Frequency-based cache management engines: LFU, PLFU and PLFUA.

The engines hold metadata only. No payload is stored or moved, so the cost
of an access is the cost of the bookkeeping alone.

Resident objects are kept in frequency buckets (dict of frequency -> ordered
dict of ids). An object enters a bucket exactly when it is accessed, so the
first id of a bucket is always the least recently requested one at that
frequency. Eviction therefore takes the first id of the minimum bucket, which
is the (minimum frequency, smallest last_access_seq) victim.
"""
from typing import Iterable, Optional

from app.modules.cache.schemas import (
    AccessEvent,
    CacheConfig,
    CacheState,
    MetadataPeaks,
    ObjectId,
    Outcome,
    Policy,
    ResidentEntry,
)

HIT = Outcome.HIT
MISS = Outcome.MISS


class CacheEngine:
    """Common interface of the optimized and the reference engines."""

    policy: Policy

    def __init__(self, config: CacheConfig):
        self.config = config
        self.capacity = config.capacity
        self.request_seq = 0
        self.peak_resident = 0
        self.peak_parked = 0

    def access(self, object_id: ObjectId) -> AccessEvent:
        raise NotImplementedError

    def metadata_size(self) -> tuple[int, int]:
        raise NotImplementedError

    def state(self) -> CacheState:
        raise NotImplementedError

    def replay(self, requests: Iterable[ObjectId]) -> list[AccessEvent]:
        """Feed every request through access() and collect the events."""
        access = self.access
        return [access(object_id) for object_id in requests]

    def metadata_peaks(self) -> MetadataPeaks:
        resident, parked = self.metadata_size()
        return MetadataPeaks(
            peak_resident=self.peak_resident,
            peak_parked=self.peak_parked,
            final_resident=resident,
            final_parked=parked,
        )


class LFUEngine(CacheEngine):
    """In-cache LFU: an evicted object's frequency is forgotten."""

    policy = Policy.LFU

    def __init__(self, config: CacheConfig):
        super().__init__(config)
        self._freq: dict[ObjectId, int] = {}
        self._last_seq: dict[ObjectId, int] = {}
        self._buckets: dict[int, dict[ObjectId, None]] = {}
        # 0 means "unknown", resolved on the next insertion
        self._min_freq = 0

    # -- hooks overridden by PLFU / PLFUA -------------------------------

    def _admits(self, object_id: ObjectId) -> bool:
        return True

    def _admission_frequency(self, object_id: ObjectId) -> int:
        return 1

    def _retire(self, object_id: ObjectId, frequency: int) -> None:
        """Handle the frequency of an evicted object; LFU discards it."""

    def _parked_count(self) -> int:
        return 0

    # -- access path ----------------------------------------------------

    def access(self, object_id: ObjectId) -> AccessEvent:
        seq = self.request_seq
        self.request_seq = seq + 1

        freq = self._freq.get(object_id)
        if freq is not None:
            self._touch(object_id, freq)
            self._last_seq[object_id] = seq
            return AccessEvent(seq, object_id, HIT)

        if not self._admits(object_id):
            return AccessEvent(seq, object_id, MISS)

        evicted = None
        if len(self._freq) >= self.capacity:
            evicted = self._evict()
        self._insert(object_id, self._admission_frequency(object_id))
        self._last_seq[object_id] = seq
        return AccessEvent(seq, object_id, MISS, evicted)

    def _touch(self, object_id: ObjectId, freq: int) -> None:
        buckets = self._buckets
        bucket = buckets[freq]
        del bucket[object_id]
        if not bucket:
            del buckets[freq]
            if self._min_freq == freq:
                self._min_freq = freq + 1
        new_freq = freq + 1
        self._freq[object_id] = new_freq
        target = buckets.get(new_freq)
        if target is None:
            buckets[new_freq] = {object_id: None}
        else:
            target[object_id] = None

    def _evict(self) -> ObjectId:
        min_freq = self._min_freq
        bucket = self._buckets[min_freq]
        victim = next(iter(bucket))
        del bucket[victim]
        if not bucket:
            del self._buckets[min_freq]
            self._min_freq = 0
        del self._last_seq[victim]
        self._retire(victim, self._freq.pop(victim))
        return victim

    def _insert(self, object_id: ObjectId, freq: int) -> None:
        self._freq[object_id] = freq
        target = self._buckets.get(freq)
        if target is None:
            self._buckets[freq] = {object_id: None}
        else:
            target[object_id] = None

        # 1 is the global lower bound, so the common LFU path never scans
        if freq == 1 or (self._min_freq and freq < self._min_freq):
            self._min_freq = freq
        elif not self._min_freq:
            self._min_freq = min(self._buckets)

        resident = len(self._freq)
        if resident > self.peak_resident:
            self.peak_resident = resident

    # -- inspection -----------------------------------------------------

    def metadata_size(self) -> tuple[int, int]:
        return len(self._freq), self._parked_count()

    def state(self) -> CacheState:
        return CacheState(
            capacity=self.capacity,
            resident={
                object_id: ResidentEntry(freq, self._last_seq[object_id])
                for object_id, freq in self._freq.items()
            },
            parked={},
            request_seq=self.request_seq,
        )


class PLFUEngine(LFUEngine):
    """Perfect LFU: evicted frequencies are parked and resumed on readmission."""

    policy = Policy.PLFU

    def __init__(self, config: CacheConfig):
        super().__init__(config)
        self._parked: dict[ObjectId, int] = {}

    def _admission_frequency(self, object_id: ObjectId) -> int:
        # The readmitting request itself counts as an access
        return self._parked.pop(object_id, 0) + 1

    def _retire(self, object_id: ObjectId, frequency: int) -> None:
        self._parked[object_id] = frequency

    def _insert(self, object_id: ObjectId, freq: int) -> None:
        super()._insert(object_id, freq)
        # Measured once the readmitted entry has left the parked table
        if len(self._parked) > self.peak_parked:
            self.peak_parked = len(self._parked)

    def _parked_count(self) -> int:
        return len(self._parked)

    def state(self) -> CacheState:
        snapshot = super().state()
        return snapshot.model_copy(update={"parked": dict(self._parked)})


class PLFUAEngine(PLFUEngine):
    """PLFU behind an admission gate: only hot objects ever enter the tables."""

    policy = Policy.PLFUA

    def __init__(self, config: CacheConfig):
        super().__init__(config)
        self._hot = frozenset(config.hot_set or ())

    def _admits(self, object_id: ObjectId) -> bool:
        return object_id in self._hot


ENGINES: dict[Policy, type[LFUEngine]] = {
    Policy.LFU: LFUEngine,
    Policy.PLFU: PLFUEngine,
    Policy.PLFUA: PLFUAEngine,
}


def new_engine(config: CacheConfig, implementation: str = "optimized") -> CacheEngine:
    """
    Create an empty engine for the given configuration.

    Args:
        config: Validated cache configuration
        implementation: "optimized" (bucketed, O(1) eviction) or
            "reference" (linear-scan victim search)

    Returns:
        Engine with empty tables and request_seq = 0
    """
    if implementation == "reference":
        from app.modules.cache.reference import ReferenceEngine

        return ReferenceEngine(config)
    if implementation != "optimized":
        raise ValueError(f"Unknown engine implementation: {implementation!r}")
    return ENGINES[config.policy](config)


def build_config(
    policy: Policy,
    capacity: int,
    hot_set: Optional[Iterable[ObjectId]] = None,
) -> CacheConfig:
    """Build a CacheConfig, freezing the hot set only for PLFUA."""
    frozen = frozenset(hot_set) if hot_set is not None and policy is Policy.PLFUA else None
    return CacheConfig(capacity=capacity, policy=policy, hot_set=frozen)
