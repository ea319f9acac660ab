"""Benchmark operations: bench, generate."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Annotated, Literal

from flair_stream import csv_utils
from flair_stream.bench import (
    CORPUS_S_MAX,
    bench_corpus,
    bench_memory,
    bench_stability,
    bench_throughput,
)
from flair_stream.cli import cli, write_output
from flair_stream.errors import InvalidParameter
from flair_stream.generators import STREAMS, DwellSpec, gen_mobility
from flair_stream.settings import DEFAULT_DELTA, DEFAULT_EPSILON
from flair_stream.stays import AttackParams
from flair_stream.stores import make_store

Workload = Literal["memory", "throughput", "stability", "corpus"]
StoreName = Literal["flair", "swab", "poly", "raw"]
StreamName = Literal["random", "constant", "linear", "piecewise", "sine"]


@cli.command()
def bench(
    workload: Annotated[Workload, "Benchmark to run"] = "memory",
    store: Annotated[StoreName, "Store under test"] = "flair",
    stream: Annotated[StreamName, "Synthetic stream for memory and stability"] = "random",
    n: Annotated[int | None, "Inserts (traces for corpus); default 1,000,000 (1,000)"] = None,
    reads: Annotated[int, "Random historical reads for throughput"] = 10_000,
    seed: Annotated[int, "Generator seed"] = 0,
    epsilon: Annotated[float, "Maximum absolute error"] = DEFAULT_EPSILON,
    format: Annotated[Literal["json", "csv"], "Report format"] = "json",
    parallel: Annotated[bool, "Scan divided sub-traces concurrently (corpus)"] = False,
    out: Annotated[str | None, "Write the report here instead of stdout"] = None,
) -> str:
    """Run a benchmark workload and print its report."""
    if n is not None and n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}")

    if workload == "corpus":
        if format != "json":
            raise InvalidParameter("the corpus workload only reports JSON")
        params = AttackParams(s_max=CORPUS_S_MAX)
        if parallel:
            with ThreadPoolExecutor() as executor:
                corpus = bench_corpus(n or 1_000, seed, params=params, delta=DEFAULT_DELTA, executor=executor)
        else:
            corpus = bench_corpus(n or 1_000, seed, params=params, delta=DEFAULT_DELTA)
        return write_output(corpus.to_json(), out)

    n = n or 1_000_000
    if workload == "throughput":
        report = bench_throughput(store, n, reads, seed, epsilon=epsilon)
    else:
        samples = STREAMS[stream](n, seed)
        target = make_store(store, epsilon)
        if workload == "stability":
            report = bench_stability(target, samples, epsilon=epsilon)
        else:
            report = bench_memory(target, samples, epsilon=epsilon)
    text = report.to_json() if format == "json" else report.to_csv()
    return write_output(text, out)


@cli.command()
def generate(
    kind: Annotated[
        Literal["random", "constant", "linear", "piecewise", "sine", "mobility"],
        "Stream family, or mobility for a trace",
    ] = "random",
    n: Annotated[int, "Number of samples (ignored for mobility)"] = 1_000,
    dwells: Annotated[int, "Dwells in a mobility trace"] = 2,
    seed: Annotated[int, "Generator seed"] = 0,
    out: Annotated[str | None, "Write the CSV here instead of stdout"] = None,
) -> str:
    """Emit a seeded synthetic stream or mobility trace as CSV."""
    if kind == "mobility":
        (case,) = gen_mobility(1, DwellSpec(n_dwells=dwells), seed)
        return write_output(csv_utils.format_trace(case.trace), out)
    return write_output(csv_utils.format_samples(STREAMS[kind](n, seed)), out)
