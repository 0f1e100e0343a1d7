from pydantic import BaseModel, Field, model_validator

from app.modules.cache.schemas import Outcome


class RunReport(BaseModel):
    hits: int = Field(..., ge=0)
    misses: int = Field(..., ge=0)
    chr: float = Field(..., ge=0.0, le=1.0)
    peak_resident: int = Field(..., ge=0)
    peak_parked: int = Field(..., ge=0)
    final_resident: int = Field(..., ge=0)
    final_parked: int = Field(..., ge=0)
    evictions: int = Field(0, ge=0)

    @model_validator(mode="after")
    def check_ratio(self) -> "RunReport":
        total = self.hits + self.misses
        if total and self.chr != self.hits / total:
            raise ValueError("chr must equal hits / (hits + misses)")
        if self.evictions > self.misses:
            raise ValueError("evictions cannot exceed misses")
        return self

    @property
    def requests(self) -> int:
        return self.hits + self.misses

    @property
    def peak_metadata(self) -> int:
        # Parked never shrinks once the cache is full, so this is the peak of the sum
        return self.peak_resident + self.peak_parked


class ScatterPoint(BaseModel):
    rank: int = Field(..., ge=1)
    occurrence_index: int = Field(..., ge=1)
    outcome: Outcome
