"""
Naive reference engine.

Keeps resident entries in a plain dict and finds the eviction victim with a
linear scan. It serves as the oracle for the bucketed engines and as a
timing engine: every eviction walks all resident entries, so the loop costs
roughly evictions x capacity.
"""
from operator import itemgetter

from app.modules.cache.schemas import (
    AccessEvent,
    CacheConfig,
    CacheState,
    ObjectId,
    Outcome,
    Policy,
    ResidentEntry,
)
from app.modules.cache.service import CacheEngine


class ReferenceEngine(CacheEngine):
    def __init__(self, config: CacheConfig):
        super().__init__(config)
        self.policy = config.policy
        # object -> [frequency, last_access_seq]
        self.resident: dict[ObjectId, list[int]] = {}
        self.parked: dict[ObjectId, int] = {}
        self._keeps_history = config.policy in (Policy.PLFU, Policy.PLFUA)
        self._hot = config.hot_set if config.policy is Policy.PLFUA else None

    def access(self, object_id: ObjectId) -> AccessEvent:
        seq = self.request_seq
        self.request_seq += 1

        entry = self.resident.get(object_id)
        if entry is not None:
            entry[0] += 1
            entry[1] = seq
            return AccessEvent(seq, object_id, Outcome.HIT)

        if self._hot is not None and object_id not in self._hot:
            return AccessEvent(seq, object_id, Outcome.MISS)

        evicted = None
        if len(self.resident) >= self.capacity:
            # [frequency, last_access_seq] lists compare lexicographically
            evicted = min(self.resident.items(), key=itemgetter(1))[0]
            frequency, _ = self.resident.pop(evicted)
            if self._keeps_history:
                self.parked[evicted] = frequency

        frequency = 1
        if self._keeps_history and object_id in self.parked:
            frequency = self.parked.pop(object_id) + 1
        self.resident[object_id] = [frequency, seq]
        self.peak_resident = max(self.peak_resident, len(self.resident))
        self.peak_parked = max(self.peak_parked, len(self.parked))
        return AccessEvent(seq, object_id, Outcome.MISS, evicted)

    def metadata_size(self) -> tuple[int, int]:
        return len(self.resident), len(self.parked)

    def state(self) -> CacheState:
        return CacheState(
            capacity=self.capacity,
            resident={k: ResidentEntry(f, s) for k, (f, s) in self.resident.items()},
            parked=dict(self.parked),
            request_seq=self.request_seq,
        )
