import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from app.modules.cache.schemas import Policy
from app.modules.metrics.schemas import RunReport


class GridMetric(str, Enum):
    MEAN_CHR = "mean_chr"
    MEAN_CPU_SECONDS = "mean_cpu_seconds"
    MEAN_PEAK_METADATA = "mean_peak_metadata"
    MEAN_EVICTIONS = "mean_evictions"


class TimingEngine(str, Enum):
    OPTIMIZED = "optimized"
    REFERENCE = "reference"


def capacity_for(rate: float, n_objects: int) -> int:
    """Cache size for a rate: floor(rate x N), at least 1."""
    return max(1, math.floor(rate * n_objects + 1e-9))


class SweepConfig(BaseModel):
    object_counts: list[int] = Field(..., min_length=1)
    rates: list[float] = Field(..., min_length=1)
    policies: list[Policy] = Field(default_factory=lambda: list(Policy), min_length=1)
    samples_per_case: int = Field(12, ge=1)
    requests_per_sample: int = Field(100_000, ge=1)
    alpha: float = Field(1.1, gt=0)
    base_seed: int = Field(0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def check_grid(self) -> "SweepConfig":
        if any(n < 1 for n in self.object_counts):
            raise ValueError("object_counts must be positive")
        if self.object_counts != sorted(set(self.object_counts)):
            raise ValueError("object_counts must be sorted and distinct")
        if any(not 0 < rate < 1 for rate in self.rates):
            raise ValueError("rates must lie in (0, 1)")
        if self.rates != sorted(set(self.rates)):
            raise ValueError("rates must be sorted and distinct")
        if len(set(self.policies)) != len(self.policies):
            raise ValueError("policies must be distinct")
        for n in self.object_counts:
            for rate in self.rates:
                if math.floor(rate * n + 1e-9) < 1:
                    raise ValueError(f"rate {rate} on N={n} gives an empty cache")
        return self

    @property
    def case_count(self) -> int:
        return len(self.object_counts) * len(self.rates)


class TimedRun(BaseModel):
    report: RunReport
    cpu_seconds: float = Field(..., ge=0.0)
    clock: str
    resolution_ok: bool


class SampleRun(BaseModel):
    sample: int
    seed: int
    policy: Policy
    run: TimedRun


class CaseResult(BaseModel):
    n_objects: int
    rate: float
    capacity: int
    samples: list[SampleRun]

    def runs_for(self, policy: Policy) -> list[SampleRun]:
        return [s for s in self.samples if s.policy is policy]


class SweepGrid(BaseModel):
    metric: GridMetric
    label: str = ""
    delta: bool = False
    rows: list[int]
    cols: list[float]
    values: list[list[float]]
    per_cell_stddev: list[list[float]]

    @model_validator(mode="after")
    def check_shape(self) -> "SweepGrid":
        for name, matrix in (("values", self.values), ("per_cell_stddev", self.per_cell_stddev)):
            if len(matrix) != len(self.rows) or any(len(row) != len(self.cols) for row in matrix):
                raise ValueError(f"{name} must be {len(self.rows)} x {len(self.cols)}")
        if not self.delta:
            cells = [v for row in self.values for v in row]
            if self.metric is GridMetric.MEAN_CHR and any(not 0.0 <= v <= 1.0 for v in cells):
                raise ValueError("mean CHR cells must lie in [0, 1]")
            if any(v < 0 for v in cells):
                raise ValueError("grid cells must be non-negative")
        return self

    def cell(self, n_objects: int, rate: float) -> float:
        return self.values[self.rows.index(n_objects)][self.cols.index(rate)]


class SweepResult(BaseModel):
    config: SweepConfig
    engine: TimingEngine
    workers: int
    cases: list[CaseResult]
    grids: dict[Policy, list[SweepGrid]]
    flagged_runs: int = 0
    clock: Optional[str] = None

    def grid(self, policy: Policy, metric: GridMetric) -> SweepGrid:
        return next(g for g in self.grids[policy] if g.metric is metric)
