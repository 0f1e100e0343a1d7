from dataclasses import dataclass, field


@dataclass(frozen=True)
class SweepCellJob:
    """
    Specification for one sweep case.

    Attributes:
        n_objects: Object universe size N of the case
        rate: Cache size rate of the case
        capacity: Cache capacity floor(rate x N), at least 1
        seeds: Trace seed per sample index, shared by every policy
        job_id: Unique identifier for the job
        name: Human-readable job name
    """
    n_objects: int
    rate: float
    capacity: int
    seeds: tuple[int, ...] = field(default_factory=tuple)
    job_id: str = ""
    name: str = ""
