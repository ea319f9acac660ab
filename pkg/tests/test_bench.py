from __future__ import annotations

import json

import numpy as np
import pytest

from flair_stream.bench import (
    BenchReport,
    bench_corpus,
    bench_memory,
    bench_stability,
    bench_throughput,
    gain_pct,
    poi_distances,
    process_batches,
    summarize_model,
)
from flair_stream.errors import InvalidParameter
from flair_stream.flair import FlairModel
from flair_stream.generators import gen_constant, gen_linear, gen_piecewise_linear, gen_random
from flair_stream.stays import Poi
from flair_stream.stores import RawStore, make_store


# ---------------------------------------------------------------------------
# Memory
# ---------------------------------------------------------------------------


def test_constant_stream_footprint_is_flat() -> None:
    report = bench_memory(make_store("flair", 0.01), gen_constant(50_000, 1.0))
    assert [n for n, _ in report.footprint] == [10_000, 20_000, 30_000, 40_000, 50_000]
    assert {fp for _, fp in report.footprint} == {7}
    assert report.raw_footprint == 100_000
    assert report.gain_pct == pytest.approx(100.0 * (1 - 7 / 100_000))


@pytest.mark.slow
def test_constant_stream_footprint_over_one_million() -> None:
    report = bench_memory(make_store("flair", 0.01), gen_constant(1_000_000, 1.0))
    assert len(report.footprint) == 100
    assert {fp for _, fp in report.footprint} == {7}


def test_raw_store_grows_two_per_sample() -> None:
    report = bench_memory(RawStore(), gen_random(300, seed=1), checkpoint=100)
    assert report.footprint == [(100, 200), (200, 400), (300, 600)]
    assert report.gain_pct == 0.0


def test_harness_adds_no_behaviour() -> None:
    stream = gen_random(2_000, seed=3)
    for name in ("flair", "swab", "poly", "raw"):
        measured = make_store(name, 5.0)
        bench_memory(measured, stream, checkpoint=500)
        direct = make_store(name, 5.0)
        for s in stream:
            direct.insert(s.t, s.x)
        direct.finalize()
        assert measured.footprint_64bit() == direct.footprint_64bit()
        assert [measured.read(t) for t in (0.0, 17.5, 1_999.0)] == [
            direct.read(t) for t in (0.0, 17.5, 1_999.0)
        ]


def test_memory_csv_series() -> None:
    report = bench_memory(make_store("flair", 0.01), gen_linear(20, 2.0), checkpoint=10)
    assert report.to_csv() == "n,footprint_64bit,raw_footprint_64bit\n10,7,20\n20,7,40\n"


def test_bench_memory_rejects_bad_checkpoint() -> None:
    with pytest.raises(InvalidParameter, match="checkpoint"):
        bench_memory(RawStore(), [], checkpoint=0)


def test_gain_pct() -> None:
    assert gain_pct(7, 0) == 0.0
    assert gain_pct(50, 200) == 75.0
    model = FlairModel(0.01)
    samples = gen_piecewise_linear(1_000, 3, seed=1)
    model.extend(samples)
    summary = summarize_model(model, samples)
    assert summary["history"] <= summary["n"] - 2
    assert summary["gain_pct"] >= 0.0
    assert summary["max_error"] <= 0.01 + 1e-9


# ---------------------------------------------------------------------------
# Throughput
# ---------------------------------------------------------------------------


def test_throughput_report_fields() -> None:
    report = bench_throughput("flair", 2_000, 500, seed=1, repeats=2, batch=100)
    data = report.to_dict()
    assert data["workload"] == "throughput"
    assert data["insert_iops"] > 0
    assert data["read_iops"] > 0
    assert report.to_csv().splitlines()[0] == "metric,value"


def test_zero_reads_omits_read_iops() -> None:
    report = bench_throughput("raw", 100, 0, repeats=1)
    assert "read_iops" not in report.to_dict()
    assert report.to_csv().splitlines()[1:] == [f"insert_iops,{report.insert_iops!r}"]


def test_poly_workload_is_capped() -> None:
    report = bench_throughput("poly", 12_000, 0, repeats=1)
    assert report.n_inserted == 10_000


def test_throughput_rejects_bad_arguments() -> None:
    with pytest.raises(InvalidParameter):
        bench_throughput("flair", 0, 10)
    with pytest.raises(InvalidParameter):
        bench_throughput("flair", 10, 10, repeats=0)


@pytest.mark.slow
def test_flair_outpaces_competitors() -> None:
    flair = bench_throughput("flair", 1_000_000, 10_000, repeats=1)
    swab = bench_throughput("swab", 1_000_000, 10_000, repeats=1)
    assert flair.insert_iops >= 10 * swab.insert_iops
    assert flair.read_iops > swab.read_iops
    flair_10k = bench_throughput("flair", 10_000, 0)
    poly = bench_throughput("poly", 10_000, 0)
    assert flair_10k.insert_iops >= 100 * poly.insert_iops


# ---------------------------------------------------------------------------
# Stability
# ---------------------------------------------------------------------------


def test_stability_spans() -> None:
    report = bench_stability(make_store("flair", 1e-6), gen_piecewise_linear(300, 3, seed=4))
    assert report.spans == [(100, 100.0), (100, 100.0), (100, 99.0)]
    assert report.to_csv() == "samples,duration\n100,100.0\n100,100.0\n100,99.0\n"


def test_random_stream_with_tiny_epsilon_breaks_densely() -> None:
    stream = gen_random(10_000, seed=6)
    report = bench_stability(make_store("flair", 1e-6), stream)
    counts = [n for n, _ in report.spans]
    assert sum(counts) == 10_000
    assert np.median(counts) <= 4


def test_stability_spans_cover_stream_for_every_store() -> None:
    stream = gen_random(500, seed=2)
    for name in ("flair", "swab", "poly"):
        report = bench_stability(make_store(name, 100.0), stream)
        assert sum(n for n, _ in report.spans) == 500


# ---------------------------------------------------------------------------
# Batching
# ---------------------------------------------------------------------------


def test_process_batches_isolates_failures() -> None:
    def halve(x: int) -> float:
        if x == 3:
            raise InvalidParameter("three is odd")
        return x / 2

    successes, failures = process_batches([1, 2, 3, 4, 5], 2, halve)
    assert successes == [0.5, 1.0, 2.0, 2.5]
    assert failures == [(3, "three is odd")]


def test_process_batches_runs_each_item_once() -> None:
    seen: list[int] = []

    def record(x: int) -> int:
        seen.append(x)
        if x % 2:
            raise InvalidParameter("odd")
        return x

    successes, failures = process_batches(list(range(6)), 4, record)
    assert successes == [0, 2, 4]
    assert failures == [(1, "odd"), (3, "odd"), (5, "odd")]
    assert seen == list(range(6))


def test_process_batches_propagates_unexpected_errors() -> None:
    def broken(x: int) -> int:
        raise KeyError(x)

    with pytest.raises(KeyError):
        process_batches([1], 10, broken)


def test_process_batches_empty() -> None:
    assert process_batches([], 10, lambda x: x) == ([], [])
    with pytest.raises(InvalidParameter, match="batch_size"):
        process_batches([1], 0, lambda x: x)


# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------


def test_poi_distances() -> None:
    a = Poi(45.0, 4.0, ())
    b = Poi(45.001, 4.0, ())
    assert poi_distances([a, b], []) == []
    assert poi_distances([b, a], [a]) == [0.0, pytest.approx(111.2, abs=0.1)]


def test_small_corpus() -> None:
    report = bench_corpus(3, seed=0)
    assert report.failures == []
    assert report.poi_within_pct == 100.0
    assert report.count_match_pct == 100.0
    assert report.visited_divided < report.visited_linear
    assert report.fewer_visits_pct == 100.0
    assert report.hidden_pct == 100.0
    assert report.spacing_ok_pct == report.endpoints_ok_pct == 100.0
    assert json.loads(report.to_json())["n_traces"] == 3


@pytest.mark.slow
def test_corpus_of_one_thousand_traces() -> None:
    report = bench_corpus(1_000, seed=0)
    assert report.failures == []
    assert report.poi_within_pct >= 90.0
    assert report.count_match_pct >= 95.0
    assert report.fewer_visits_pct == 100.0
    assert report.hidden_pct == 100.0
    assert report.spacing_ok_pct == report.endpoints_ok_pct == 100.0


def test_report_json_drops_missing_iops() -> None:
    report = BenchReport("flair", "memory", 0, 0.01)
    assert json.loads(report.to_json()) == {
        "store": "flair",
        "workload": "memory",
        "n_inserted": 0,
        "epsilon": 0.01,
        "footprint": [],
        "raw_footprint": 0,
        "gain_pct": None,
        "spans": [],
    }
