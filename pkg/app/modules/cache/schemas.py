from enum import Enum
from typing import NamedTuple, Optional

from pydantic import BaseModel, Field, model_validator

ObjectId = int


class Policy(str, Enum):
    LFU = "lfu"
    PLFU = "plfu"
    PLFUA = "plfua"


class Outcome(str, Enum):
    HIT = "hit"
    MISS = "miss"


class CacheConfig(BaseModel):
    """Capacity, policy and (for PLFUA) the admission-eligible hot set."""

    capacity: int = Field(..., ge=1)
    policy: Policy
    hot_set: Optional[frozenset[ObjectId]] = None

    @model_validator(mode="after")
    def check_hot_set(self) -> "CacheConfig":
        if self.policy is Policy.PLFUA and not self.hot_set:
            raise ValueError("PLFUA requires a non-empty hot_set")
        return self

    class Config:
        frozen = True


class AccessEvent(NamedTuple):
    seq: int
    object: ObjectId
    outcome: Outcome
    evicted: Optional[ObjectId] = None


class ResidentEntry(NamedTuple):
    frequency: int
    last_access_seq: int


class CacheState(BaseModel):
    """Point-in-time copy of an engine's metadata tables."""

    capacity: int
    resident: dict[ObjectId, ResidentEntry]
    parked: dict[ObjectId, int]
    request_seq: int


class MetadataPeaks(BaseModel):
    peak_resident: int = 0
    peak_parked: int = 0
    final_resident: int = 0
    final_parked: int = 0
