"""Benchmark harness: memory, throughput, stability and the mobility corpus."""

from __future__ import annotations

import json
import logging
import time
from collections.abc import Callable, Sequence
from concurrent.futures import Executor
from dataclasses import asdict, dataclass, field
from typing import TypeVar

import numpy as np

from flair_stream.csv_utils import format_rows
from flair_stream.errors import FlairError, InvalidParameter
from flair_stream.flair import FlairModel, Sample, check_epsilon
from flair_stream.generators import DwellSpec, MobilityCase, gen_mobility, gen_random
from flair_stream.geo import haversine
from flair_stream.promesse import PromesseParams, promesse
from flair_stream.settings import (
    CHECKPOINT_EVERY,
    DEFAULT_DELTA,
    DEFAULT_EPSILON,
    POLY_INSERT_CAP,
    THROUGHPUT_REPEATS,
    TIMING_BATCH,
)
from flair_stream.stays import AttackParams, Poi, poi_attack
from flair_stream.stores import Store, make_store

logger = logging.getLogger(__name__)

T = TypeVar("T")
U = TypeVar("U")

# Fidelity tolerance between divided and linear POIs.
POI_MATCH_M = 25.0
# Sub-trace size for the corpus: small enough that transit halves get discarded.
CORPUS_S_MAX = 64


@dataclass
class BenchReport:
    store: str
    workload: str
    n_inserted: int
    epsilon: float
    footprint: list[tuple[int, int]] = field(default_factory=list)
    raw_footprint: int = 0
    gain_pct: float | None = None
    insert_iops: float | None = None
    read_iops: float | None = None
    spans: list[tuple[int, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        data = asdict(self)
        if self.read_iops is None:
            del data["read_iops"]
        if self.insert_iops is None:
            del data["insert_iops"]
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        """Plot-ready series for the workload."""
        if self.workload == "stability":
            return format_rows(["samples", "duration"], self.spans)
        if self.workload == "throughput":
            rows = [("insert_iops", self.insert_iops)]
            if self.read_iops is not None:
                rows.append(("read_iops", self.read_iops))
            return format_rows(["metric", "value"], rows)
        return format_rows(
            ["n", "footprint_64bit", "raw_footprint_64bit"],
            ((n, fp, 2 * n) for n, fp in self.footprint),
        )


def gain_pct(footprint: int, raw_footprint: int) -> float:
    if raw_footprint == 0:
        return 0.0
    return 100.0 * (1.0 - footprint / raw_footprint)


def summarize_model(model: FlairModel, samples: Sequence[Sample]) -> dict:
    """n, |H|, floats, gain vs raw, and the read-back error over the raw stream."""
    errors = np.array([abs(model.read(s.t) - s.x) for s in samples]) if samples else np.zeros(1)
    floats = model.footprint_64bit()
    return {
        "n": len(samples),
        "history": model.history_size,
        "floats": floats,
        "gain_pct": gain_pct(floats, 2 * len(samples)),
        "mae": float(errors.mean()),
        "max_error": float(errors.max()),
    }


# ---------------------------------------------------------------------------
# Univariate workloads
# ---------------------------------------------------------------------------


def bench_memory(
    store: Store,
    stream: Sequence[Sample],
    *,
    workload: str = "memory",
    epsilon: float = DEFAULT_EPSILON,
    checkpoint: int = CHECKPOINT_EVERY,
) -> BenchReport:
    """Footprint after every ``checkpoint`` inserts."""
    if checkpoint < 1:
        raise InvalidParameter(f"checkpoint must be >= 1, got {checkpoint}")
    series: list[tuple[int, int]] = []
    for n, sample in enumerate(stream, start=1):
        store.insert(sample.t, sample.x)
        if n % checkpoint == 0:
            series.append((n, store.footprint_64bit()))
            logger.debug("%s: %d inserted, footprint %d", store.name, n, series[-1][1])
    store.finalize()
    raw = 2 * len(stream)
    footprint = store.footprint_64bit()
    return BenchReport(
        store=store.name,
        workload=workload,
        n_inserted=len(stream),
        epsilon=epsilon,
        footprint=series,
        raw_footprint=raw,
        gain_pct=gain_pct(footprint, raw),
    )


def _timed(fn: Callable[[Sequence[float]], None], items: Sequence, batch: int) -> float:
    """Total seconds spent in fn, measured per batch with a monotonic clock."""
    total = 0.0
    for i in range(0, len(items), batch):
        chunk = items[i : i + batch]
        start = time.perf_counter()
        fn(chunk)
        total += time.perf_counter() - start
    return total


def bench_throughput(
    store_name: str,
    n_insert: int,
    n_reads: int,
    seed: int = 0,
    *,
    epsilon: float = DEFAULT_EPSILON,
    repeats: int = THROUGHPUT_REPEATS,
    batch: int = TIMING_BATCH,
) -> BenchReport:
    """Mean insert and read IOPS over fresh stores fed the same random stream.

    The polynomial store only gets POLY_INSERT_CAP inserts. Stores are
    finalized (inside the insert timing) before reads are timed.
    """
    epsilon = check_epsilon(epsilon)
    if n_insert < 1 or n_reads < 0 or repeats < 1:
        raise InvalidParameter("need n_insert >= 1, n_reads >= 0 and repeats >= 1")
    if store_name == "poly":
        n_insert = min(n_insert, POLY_INSERT_CAP)
    stream = gen_random(n_insert, seed)
    ts = [s.t for s in stream]
    xs = [s.x for s in stream]
    reads = np.random.default_rng(seed + 1).uniform(ts[0], ts[-1], size=n_reads).tolist()

    insert_iops: list[float] = []
    read_iops: list[float] = []
    footprint = 0
    for repeat in range(repeats):
        store = make_store(store_name, epsilon)
        insert = store.insert

        def insert_chunk(chunk: Sequence[int]) -> None:
            for i in chunk:
                insert(ts[i], xs[i])

        elapsed = _timed(insert_chunk, range(n_insert), batch)
        start = time.perf_counter()
        store.finalize()
        elapsed += time.perf_counter() - start
        insert_iops.append(n_insert / elapsed)

        if n_reads:
            read = store.read

            def read_chunk(chunk: Sequence[float]) -> None:
                for t in chunk:
                    read(t)

            read_iops.append(n_reads / _timed(read_chunk, reads, batch))
        footprint = store.footprint_64bit()
        logger.debug("%s repeat %d: %.0f insert/s", store_name, repeat, insert_iops[-1])

    report = BenchReport(
        store=store_name,
        workload="throughput",
        n_inserted=n_insert,
        epsilon=epsilon,
        raw_footprint=2 * n_insert,
        gain_pct=gain_pct(footprint, 2 * n_insert),
        insert_iops=float(np.mean(insert_iops)),
        read_iops=float(np.mean(read_iops)) if read_iops else None,
    )
    logger.info(
        "%s: %.0f insert/s, %s read/s",
        store_name,
        report.insert_iops,
        "-" if report.read_iops is None else f"{report.read_iops:.0f}",
    )
    return report


def bench_stability(
    store: Store, stream: Sequence[Sample], *, epsilon: float = DEFAULT_EPSILON
) -> BenchReport:
    """Samples covered and time spanned by each model."""
    for sample in stream:
        store.insert(sample.t, sample.x)
    store.finalize()
    raw = 2 * len(stream)
    return BenchReport(
        store=store.name,
        workload="stability",
        n_inserted=len(stream),
        epsilon=epsilon,
        raw_footprint=raw,
        gain_pct=gain_pct(store.footprint_64bit(), raw),
        spans=store.spans(),
    )


# ---------------------------------------------------------------------------
# Batching
# ---------------------------------------------------------------------------


def process_batches(
    items: list[T],
    batch_size: int,
    process_fn: Callable[[T], U],
) -> tuple[list[U], list[tuple[T, str]]]:
    """Process items one by one, logging progress every batch_size items.

    A FlairError raised for one item is recorded and the run moves on; any
    other exception propagates. Returns (successes, failures) where failures
    pairs an item with its error.
    """
    if batch_size < 1:
        raise InvalidParameter(f"batch_size must be >= 1, got {batch_size}")
    successes: list[U] = []
    failures: list[tuple[T, str]] = []

    for i, item in enumerate(items, start=1):
        try:
            successes.append(process_fn(item))
        except FlairError as e:
            logger.warning("Item %d failed: %s", i, e)
            failures.append((item, str(e)))
        if i % batch_size == 0 or i == len(items):
            logger.debug("Processed %d/%d items, %d failed", i, len(items), len(failures))

    return successes, failures


# ---------------------------------------------------------------------------
# Mobility corpus
# ---------------------------------------------------------------------------


def poi_distances(candidates: Sequence[Poi], reference: Sequence[Poi]) -> list[float]:
    """Distance from each candidate POI to its closest reference POI, ascending.

    Empty when there is no reference POI to measure against.
    """
    if not reference:
        return []
    return sorted(
        min(haversine(c.centroid, r.centroid) for r in reference) for c in candidates
    )


@dataclass
class TraceOutcome:
    index: int
    n_points: int
    linear_pois: int
    divided_pois: int
    protected_pois: int
    visited_linear: int
    visited_divided: int
    distances: list[float]
    spacing_ok: bool
    endpoints_ok: bool


@dataclass
class CorpusReport:
    n_traces: int
    failures: list[tuple[int, str]]
    poi_within_pct: float
    count_match_pct: float
    visited_linear: int
    visited_divided: int
    fewer_visits_pct: float
    hidden_pct: float
    spacing_ok_pct: float
    endpoints_ok_pct: float

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def run_trace(
    index: int,
    case: MobilityCase,
    params: AttackParams,
    delta: float,
    executor: Executor | None = None,
) -> TraceOutcome:
    trace = case.trace
    linear = poi_attack(trace, params, "linear")
    divided = poi_attack(trace, params, "divided", executor=executor)
    protected = promesse(trace, PromesseParams(delta))
    hidden = poi_attack(protected, params, "linear")
    gaps = [
        haversine(p.latlon, q.latlon) for p, q in zip(protected, protected[1:])
    ][:-1]
    return TraceOutcome(
        index=index,
        n_points=len(trace),
        linear_pois=len(linear.pois),
        divided_pois=len(divided.pois),
        protected_pois=len(hidden.pois),
        visited_linear=linear.visited,
        visited_divided=divided.visited,
        distances=poi_distances(divided.pois, linear.pois),
        spacing_ok=all(abs(g - delta) <= 1e-6 for g in gaps),
        endpoints_ok=protected[0].t == trace[0].t and protected[-1].t == trace[-1].t,
    )


def _pct(count: int, total: int) -> float:
    return 100.0 * count / total if total else 0.0


def bench_corpus(
    n_traces: int,
    seed: int = 0,
    *,
    params: AttackParams | None = None,
    delta: float = DEFAULT_DELTA,
    spec: DwellSpec | None = None,
    batch_size: int = 50,
    executor: Executor | None = None,
) -> CorpusReport:
    """Linear vs divided attacks and Promesse over a seeded mobility corpus."""
    params = params or AttackParams(s_max=CORPUS_S_MAX)
    cases = list(enumerate(gen_mobility(n_traces, spec, seed)))

    def run(item: tuple[int, MobilityCase]) -> TraceOutcome:
        i, case = item
        return run_trace(i, case, params, delta, executor)

    outcomes, failed = process_batches(cases, batch_size, run)
    failures = [(i, message) for (i, _), message in failed]

    distances = [d for o in outcomes for d in o.distances]
    done = len(outcomes)
    report = CorpusReport(
        n_traces=n_traces,
        failures=failures,
        poi_within_pct=_pct(sum(d <= POI_MATCH_M for d in distances), len(distances)),
        count_match_pct=_pct(sum(o.linear_pois == o.divided_pois for o in outcomes), done),
        visited_linear=sum(o.visited_linear for o in outcomes),
        visited_divided=sum(o.visited_divided for o in outcomes),
        fewer_visits_pct=_pct(sum(o.visited_divided < o.visited_linear for o in outcomes), done),
        hidden_pct=_pct(sum(o.protected_pois == 0 for o in outcomes), done),
        spacing_ok_pct=_pct(sum(o.spacing_ok for o in outcomes), done),
        endpoints_ok_pct=_pct(sum(o.endpoints_ok for o in outcomes), done),
    )
    logger.info(
        "Corpus of %d traces: %.1f%% POIs within %.0f m, counts match on %.1f%%, "
        "Promesse hides all POIs on %.1f%%",
        n_traces,
        report.poi_within_pct,
        POI_MATCH_M,
        report.count_match_pct,
        report.hidden_pct,
    )
    return report
