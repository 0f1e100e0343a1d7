import json

import pandas as pd
import pytest
from conftest import A, B, C, make_trace
from pydantic import ValidationError

from app.core.exceptions import EmptyEventsError, UnknownObjectError
from app.modules.cache.schemas import AccessEvent, MetadataPeaks, Outcome, Policy
from app.modules.metrics import repository
from app.modules.metrics.schemas import RunReport
from app.modules.metrics.service import (
    miss_ratios,
    rank_frequency,
    scatter,
    simulate,
    starved_objects,
    summarize,
)
from app.modules.workload.schemas import ZipfSpec
from app.modules.workload.service import generate, hot_set, popularity_ranks

M, H = Outcome.MISS, Outcome.HIT


def test_summarize_lfu_hand_trace(lfu_hand_trace):
    events, peaks = simulate(lfu_hand_trace, Policy.LFU, 2)
    report = summarize(events, peaks)
    assert (report.hits, report.misses) == (2, 4)
    assert report.chr == pytest.approx(1 / 3)
    assert report.requests == 6
    assert (report.peak_resident, report.peak_parked) == (2, 0)
    assert (report.final_resident, report.final_parked) == (2, 0)
    assert report.evictions == 2


def test_summarize_all_hits():
    events = [AccessEvent(seq, A, H) for seq in range(4)]
    assert summarize(events, MetadataPeaks()).chr == 1.0


def test_summarize_empty():
    with pytest.raises(EmptyEventsError):
        summarize([], MetadataPeaks())


def test_run_report_rejects_inconsistent_ratio():
    with pytest.raises(ValidationError):
        RunReport(hits=1, misses=1, chr=0.75, peak_resident=1, peak_parked=0, final_resident=1, final_parked=0)


def test_run_report_rejects_more_evictions_than_misses():
    with pytest.raises(ValidationError):
        RunReport(
            hits=1, misses=1, chr=0.5, peak_resident=1, peak_parked=0, final_resident=1, final_parked=0, evictions=2
        )


def test_plfu_report_counts_parked_metadata():
    events, peaks = simulate(make_trace([A, B, A]), Policy.PLFU, 1)
    report = summarize(events, peaks)
    assert report.peak_parked == 1
    assert report.final_parked == 1
    assert report.peak_metadata == 2
    assert report.evictions == 2


def test_scatter_compulsory_then_hit():
    events = [AccessEvent(0, A, M), AccessEvent(1, A, H)]
    points = scatter(events, {A: 1})
    assert [(p.rank, p.occurrence_index, p.outcome) for p in points] == [(1, 1, M), (1, 2, H)]


def test_scatter_lfu_hand_trace(lfu_hand_trace):
    events, _ = simulate(lfu_hand_trace, Policy.LFU, 2)
    ranks = popularity_ranks(lfu_hand_trace)
    per_rank: dict[int, list[Outcome]] = {}
    for point in scatter(events, ranks):
        per_rank.setdefault(point.rank, []).append(point.outcome)

    assert per_rank[ranks[A]] == [M, H, H]
    assert per_rank[ranks[B]] == [M, M]
    assert per_rank[ranks[C]] == [M]


def test_scatter_one_point_per_event(small_zipf_trace):
    events, _ = simulate(small_zipf_trace, Policy.PLFU, 10)
    points = scatter(events, popularity_ranks(small_zipf_trace))
    assert len(points) == len(events)

    seen: dict[int, int] = {}
    for point in points:
        expected = seen.get(point.rank, 0) + 1
        assert point.occurrence_index == expected
        if expected == 1:
            assert point.outcome is M
        seen[point.rank] = expected


def test_scatter_unknown_object():
    with pytest.raises(UnknownObjectError):
        scatter([AccessEvent(0, 42, M)], {A: 1})


def test_miss_ratios(lfu_hand_trace):
    events, _ = simulate(lfu_hand_trace, Policy.LFU, 2)
    assert miss_ratios(events) == {A: pytest.approx(1 / 3), B: 1.0, C: 1.0}


def test_starved_objects_respects_rank_and_threshold(lfu_hand_trace):
    events, _ = simulate(lfu_hand_trace, Policy.LFU, 2)
    ranks = popularity_ranks(lfu_hand_trace)
    assert starved_objects(events, ranks, max_rank=3, threshold=0.9) == sorted([B, C])
    assert starved_objects(events, ranks, max_rank=ranks[B], threshold=0.9) == [B]
    assert starved_objects(events, ranks, max_rank=3, threshold=1.0) == []


def test_plfu_starves_fewer_popular_objects():
    lfu_total = plfu_total = 0
    for seed in range(5):
        trace = generate(ZipfSpec(n_objects=212, alpha=1.1, n_requests=100_000, seed=seed))
        ranks = popularity_ranks(trace)
        for policy in (Policy.LFU, Policy.PLFU):
            events, _ = simulate(trace, policy, 50)
            count = len(starved_objects(events, ranks, max_rank=100, threshold=0.9))
            if policy is Policy.LFU:
                lfu_total += count
            else:
                plfu_total += count
    assert plfu_total < lfu_total


def test_plfua_simulation_uses_hot_set(small_zipf_trace):
    hot = hot_set(small_zipf_trace, 5)
    events, peaks = simulate(small_zipf_trace, Policy.PLFUA, 5, hot)
    assert peaks.peak_resident + peaks.peak_parked <= 10
    assert all(e.outcome is M for e in events if e.object not in hot)


def test_rank_frequency():
    rows = rank_frequency(make_trace([4, 4, 4, 2, 2, 9]))
    assert rows == [(1, 4, 3, 0.5), (2, 2, 2, pytest.approx(1 / 3)), (3, 9, 1, pytest.approx(1 / 6))]


# ---- files ---------------------------------------------------------------


def test_report_json_round_trip(tmp_path, lfu_hand_trace):
    report = summarize(*simulate(lfu_hand_trace, Policy.LFU, 2))
    path = repository.write_report(report, tmp_path / "report.json")
    assert set(json.loads(path.read_text(encoding="utf-8"))) == set(RunReport.model_fields)
    assert repository.read_report(path) == report


def test_scatter_csv(tmp_path, lfu_hand_trace):
    events, _ = simulate(lfu_hand_trace, Policy.LFU, 2)
    path = repository.write_scatter(scatter(events, popularity_ranks(lfu_hand_trace)), tmp_path / "s.csv")
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["rank", "occurrence_index", "outcome"]
    assert len(frame) == 6
    assert set(frame["outcome"]) == {"hit", "miss"}


def test_empty_scatter_csv_has_header_only(tmp_path):
    path = repository.write_scatter([], tmp_path / "empty.csv")
    assert path.read_text(encoding="utf-8") == "rank,occurrence_index,outcome\n"


def test_events_csv(tmp_path, lfu_hand_trace):
    events, _ = simulate(lfu_hand_trace, Policy.LFU, 2)
    path = repository.write_events(events, tmp_path / "events.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "seq,object,outcome,evicted"
    assert lines[1] == f"0,{A},miss,"
    assert lines[4] == f"3,{C},miss,{B}"
