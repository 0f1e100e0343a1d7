# Report and plot-data exports
from pathlib import Path
from typing import Iterable, Union

import pandas as pd

from app.modules.cache.schemas import AccessEvent, ObjectId
from app.modules.metrics.schemas import RunReport, ScatterPoint

PathLike = Union[str, Path]

SCATTER_COLUMNS = ["rank", "occurrence_index", "outcome"]
EVENT_COLUMNS = ["seq", "object", "outcome", "evicted"]
RANK_COLUMNS = ["rank", "object", "count", "probability"]


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_report(report: RunReport, path: PathLike) -> Path:
    """Write a RunReport as JSON; keys are exactly the RunReport field names."""
    path = _prepare(path)
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def read_report(path: PathLike) -> RunReport:
    return RunReport.model_validate_json(Path(path).read_text(encoding="utf-8"))


def write_scatter(points: Iterable[ScatterPoint], path: PathLike) -> Path:
    """Write rank,occurrence_index,outcome rows (outcome is hit or miss)."""
    rows = [(p.rank, p.occurrence_index, p.outcome.value) for p in points]
    pd.DataFrame(rows, columns=SCATTER_COLUMNS).to_csv(_prepare(path), index=False, lineterminator="\n")
    return Path(path)


def write_events(events: Iterable[AccessEvent], path: PathLike) -> Path:
    """Write seq,object,outcome,evicted rows; evicted is empty when nothing was evicted."""
    rows = [
        (e.seq, e.object, e.outcome.value, "" if e.evicted is None else e.evicted)
        for e in events
    ]
    pd.DataFrame(rows, columns=EVENT_COLUMNS).to_csv(_prepare(path), index=False, lineterminator="\n")
    return Path(path)


def write_rank_frequency(rows: Iterable[tuple[int, ObjectId, int, float]], path: PathLike) -> Path:
    pd.DataFrame(list(rows), columns=RANK_COLUMNS).to_csv(_prepare(path), index=False, lineterminator="\n")
    return Path(path)
