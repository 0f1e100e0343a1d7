import numpy as np
import pytest

from app.core.config import settings
from app.modules.cache.schemas import ObjectId
from app.modules.workload.schemas import Ingested, Trace, ZipfSpec
from app.modules.workload.service import generate

# Object ids for the hand-simulated traces
A, B, C = 1, 2, 3


def make_trace(ids: list[ObjectId], source: str = "<test>") -> Trace:
    """An ingested-style trace: popularity ranks come from request counts."""
    return Trace(requests=np.asarray(ids, dtype=np.int64), provenance=Ingested(source=source))


@pytest.fixture(autouse=True)
def no_log_files(monkeypatch):
    """Keep test runs from writing per-run log files."""
    monkeypatch.setattr(settings, "LOG_TO_FILE", False)


@pytest.fixture
def lfu_hand_trace() -> Trace:
    return make_trace([A, B, A, C, A, B])


@pytest.fixture
def small_zipf_trace() -> Trace:
    return generate(ZipfSpec(n_objects=100, alpha=1.1, n_requests=5_000, seed=7))


@pytest.fixture
def trace_file(tmp_path, lfu_hand_trace):
    path = tmp_path / "hand.trace"
    path.write_text("\n".join(str(i) for i in lfu_hand_trace.as_list()) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def sessions_file(tmp_path):
    path = tmp_path / "sessions.csv"
    path.write_text(
        "start,end,content_id\n"
        "100,220,7\n"  # 120 s
        "150,209,8\n"  # 59 s
        "300,3900,9\n",  # 3600 s
        encoding="utf-8",
    )
    return path
