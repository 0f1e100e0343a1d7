import math

import numpy as np
import pytest
from conftest import make_trace
from pydantic import ValidationError

from app.core.exceptions import InsufficientObjectsError, InvalidParameterError, MalformedRecordError, TraceParseError
from app.modules.workload import repository
from app.modules.workload.schemas import SessionRecord, Synthetic, ZipfSpec
from app.modules.workload.service import (
    by_popularity,
    generate,
    goodness_of_fit,
    hot_set,
    ingest_sessions,
    popularity_ranks,
    zipf_pmf,
)

# ---- zipf_pmf ------------------------------------------------------------


def test_pmf_single_object():
    assert zipf_pmf(1, 1.1).tolist() == [1.0]


def test_pmf_ratio_of_first_two_ranks():
    p = zipf_pmf(2, 1.1)
    assert p[0] / p[1] == pytest.approx(2**1.1, rel=1e-12)


def test_pmf_matches_direct_summation():
    norm = math.fsum(k**-1.1 for k in range(1, 4))
    expected = [i**-1.1 / norm for i in range(1, 4)]
    assert zipf_pmf(3, 1.1) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("n_objects", [1, 2, 100, 4642, 100_000])
def test_pmf_sums_to_one_and_is_non_increasing(n_objects):
    p = zipf_pmf(n_objects, 1.1)
    assert abs(math.fsum(p.tolist()) - 1.0) <= 1e-12
    assert np.all(np.diff(p) <= 0)


@pytest.mark.parametrize("n_objects, alpha", [(0, 1.1), (10, 0.0), (10, -1.0)])
def test_pmf_rejects_bad_parameters(n_objects, alpha):
    with pytest.raises(InvalidParameterError):
        zipf_pmf(n_objects, alpha)


# ---- generate ------------------------------------------------------------


def test_generate_single_object():
    trace = generate(ZipfSpec(n_objects=1, alpha=1.1, n_requests=5, seed=3))
    assert trace.as_list() == [1, 1, 1, 1, 1]


def test_generate_is_deterministic_and_in_range():
    spec = ZipfSpec(n_objects=500, alpha=1.1, n_requests=20_000, seed=99)
    first, second = generate(spec), generate(spec)
    assert np.array_equal(first.requests, second.requests)
    assert first.requests.min() >= 1 and first.requests.max() <= 500
    assert isinstance(first.provenance, Synthetic)

    other = generate(spec.model_copy(update={"seed": 100}))
    assert not np.array_equal(first.requests, other.requests)


def test_rank_one_frequency_within_three_standard_errors():
    n = 100_000
    trace = generate(ZipfSpec(n_objects=100, alpha=1.1, n_requests=n, seed=1234))
    p1 = zipf_pmf(100, 1.1)[0]
    observed = np.count_nonzero(trace.requests == 1) / n
    assert abs(observed - p1) <= 3 * math.sqrt(p1 * (1 - p1) / n)


def test_generated_trace_passes_chi_square():
    trace = generate(ZipfSpec(n_objects=100, alpha=1.1, n_requests=100_000, seed=2024))
    _, p_value = goodness_of_fit(trace, 100, 1.1)
    assert p_value > 0.001


@pytest.mark.parametrize("ids", [[0, 1, 2], [1, 2, 11]])
def test_goodness_of_fit_rejects_ids_outside_range(ids):
    with pytest.raises(InvalidParameterError):
        goodness_of_fit(make_trace(ids), 10, 1.1)


@pytest.mark.parametrize(
    "fields",
    [
        {"n_objects": 0, "alpha": 1.1, "n_requests": 10, "seed": 0},
        {"n_objects": 10, "alpha": 0, "n_requests": 10, "seed": 0},
        {"n_objects": 10, "alpha": 1.1, "n_requests": 0, "seed": 0},
        {"n_objects": 10, "alpha": 1.1, "n_requests": 10, "seed": -1},
    ],
)
def test_zipf_spec_validation(fields):
    with pytest.raises(ValidationError):
        ZipfSpec(**fields)


# ---- sessions ------------------------------------------------------------


def _session(start, duration, content):
    return SessionRecord(start=start, end=start + duration, content=content)


def test_short_sessions_are_dropped():
    records = [_session(s, 30, s) for s in range(5)]
    assert len(ingest_sessions(records, min_duration=60)) == 0


def test_qualifying_sessions_in_start_order():
    records = [_session(500, 3600, 9), _session(100, 120, 7), _session(200, 59, 8)]
    assert ingest_sessions(records, min_duration=60).as_list() == [7, 9]


def test_window_is_start_inclusive_end_exclusive():
    records = [_session(s, 100, s) for s in (10, 20, 30)]
    trace = ingest_sessions(records, min_duration=60, window=(10, 30))
    assert trace.as_list() == [10, 20]


def test_session_end_before_start_is_rejected():
    with pytest.raises(ValidationError):
        SessionRecord(start=10, end=5, content=1)


def test_read_sessions(sessions_file):
    records = repository.read_sessions(sessions_file)
    assert [(r.start, r.duration, r.content) for r in records] == [(100, 120, 7), (150, 59, 8), (300, 3600, 9)]


@pytest.mark.parametrize(
    "body, line",
    [
        ("start,end,content_id\n10,20,1\n30,25,2\n", 3),
        ("start,end,content_id\n10,20,1\n30,x,2\n", 3),
        ("start,end,content_id\n10,,1\n", 2),
        ("begin,end,content_id\n10,20,1\n", 1),
        ("start,end,content_id\n100,220,7\n\n\n10,5,1\n", 5),
    ],
)
def test_read_sessions_reports_line(tmp_path, body, line):
    path = tmp_path / "bad.csv"
    path.write_text(body, encoding="utf-8")
    with pytest.raises(MalformedRecordError) as exc_info:
        repository.read_sessions(path)
    assert exc_info.value.line == line
    assert f"bad.csv:{line}" in str(exc_info.value)


def test_read_sessions_skips_blank_lines(tmp_path):
    path = tmp_path / "gaps.csv"
    path.write_text("start,end,content_id\n\n100,220,7\n\n300,3900,9\n\n", encoding="utf-8")
    assert [r.content for r in repository.read_sessions(path)] == [7, 9]


# ---- trace files ---------------------------------------------------------


def test_trace_file_round_trip(tmp_path, small_zipf_trace):
    path = repository.write_trace(small_zipf_trace, tmp_path / "out" / "zipf.trace")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == len(small_zipf_trace)
    assert np.array_equal(repository.read_trace(path).requests, small_zipf_trace.requests)


def test_trace_parse_error_has_line_number(tmp_path):
    path = tmp_path / "bad.trace"
    path.write_text("1\n2\nthree\n4\n", encoding="utf-8")
    with pytest.raises(TraceParseError) as exc_info:
        repository.read_trace(path)
    assert exc_info.value.line == 3


def test_read_missing_trace_raises_os_error(tmp_path):
    with pytest.raises(OSError):
        repository.read_trace(tmp_path / "missing.trace")


# ---- popularity ----------------------------------------------------------


def test_synthetic_hot_set_is_top_ranks():
    spec = ZipfSpec(n_objects=100, alpha=1.1, n_requests=10, seed=0)
    assert hot_set(spec, 10) == frozenset(range(1, 21))
    assert hot_set(generate(spec), 10) == frozenset(range(1, 21))


def test_ingested_hot_set_counts_requests():
    trace = make_trace([1, 1, 2, 3, 3, 3])
    assert hot_set(trace, 1) == frozenset({3, 1})


def test_hot_set_ties_prefer_smaller_id():
    trace = make_trace([5, 4, 3, 5, 4, 3])
    assert hot_set(trace, 1) == frozenset({3, 4})


def test_hot_set_needs_enough_objects():
    spec = ZipfSpec(n_objects=100, alpha=1.1, n_requests=10, seed=0)
    with pytest.raises(InsufficientObjectsError):
        hot_set(spec, 60)
    with pytest.raises(InsufficientObjectsError):
        hot_set(make_trace([1, 2, 3]), 2)


def test_popularity_ranks():
    assert popularity_ranks(make_trace([9, 9, 2, 7, 7, 7])) == {7: 1, 9: 2, 2: 3}
    synthetic = generate(ZipfSpec(n_objects=50, alpha=1.1, n_requests=2_000, seed=4))
    assert all(rank == obj for obj, rank in popularity_ranks(synthetic).items())
    assert by_popularity(make_trace([2, 1])) == [(1, 1), (2, 1)]
