from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from app.modules.cache.schemas import ObjectId


class ZipfSpec(BaseModel):
    n_objects: int = Field(..., ge=1)
    alpha: float = Field(..., gt=0)
    n_requests: int = Field(..., ge=1)
    seed: int = Field(..., ge=0, lt=2**64)

    class Config:
        frozen = True


class SessionRecord(BaseModel):
    """One viewing session: start/end epoch seconds and the content watched."""

    start: int
    end: int
    content: ObjectId = Field(..., ge=0)

    @model_validator(mode="after")
    def check_order(self) -> "SessionRecord":
        if self.end < self.start:
            raise ValueError(f"end ({self.end}) is before start ({self.start})")
        return self

    @property
    def duration(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class Synthetic:
    spec: ZipfSpec


@dataclass(frozen=True)
class Ingested:
    source: str
    min_duration: Optional[int] = None
    window: Optional[tuple[Optional[int], Optional[int]]] = None


Provenance = Union[Synthetic, Ingested]


@dataclass(frozen=True, eq=False)
class Trace:
    """Ordered request ids plus where they came from."""

    requests: np.ndarray
    provenance: Provenance = field(default_factory=lambda: Ingested(source="<memory>"))

    def __len__(self) -> int:
        return int(self.requests.shape[0])

    def as_list(self) -> list[ObjectId]:
        """Plain Python ints; iterating these is much cheaper than numpy scalars."""
        return self.requests.tolist()

    def distinct_count(self) -> int:
        return int(np.unique(self.requests).size)
