from __future__ import annotations

import pytest

from flair_stream.errors import EmptyModel, NonMonotonicTimestamp, UnknownStore
from flair_stream.flair import FlairModel, Sample
from flair_stream.generators import gen_constant, gen_piecewise_linear, gen_random
from flair_stream.polynomial import PolyStore
from flair_stream.segmentation import SwabStore
from flair_stream.stores import STORES, FlairStore, RawStore, make_store


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


def test_registry_builds_each_store() -> None:
    assert sorted(STORES) == ["flair", "poly", "raw", "swab"]
    assert isinstance(make_store("flair", 0.1), FlairStore)
    assert isinstance(make_store("swab", 0.1, window=8), SwabStore)
    assert make_store("swab", 0.1, window=8).window == 8
    assert make_store("poly", 0.1, max_degree=3).max_degree == 3
    assert isinstance(make_store("raw", 0.1), RawStore)
    assert all(make_store(name, 0.1).name == name for name in STORES)


def test_unknown_store_lists_available() -> None:
    with pytest.raises(UnknownStore, match="Available: flair, swab, poly, raw"):
        make_store("sqlite", 0.1)


@pytest.mark.parametrize("name", sorted(STORES))
def test_every_store_shares_the_interface(name: str) -> None:
    store = make_store(name, 1.0)
    with pytest.raises(EmptyModel):
        store.read(0.0)
    for s in gen_constant(30, 2.0):
        store.insert(s.t, s.x)
    store.finalize()
    assert store.read(10.0) == pytest.approx(2.0)
    assert store.footprint_64bit() > 0
    with pytest.raises(NonMonotonicTimestamp):
        store.insert(0.0, 2.0)


# ---------------------------------------------------------------------------
# RawStore
# ---------------------------------------------------------------------------


def test_raw_store_is_lossless() -> None:
    store = RawStore()
    samples = gen_random(100, seed=1)
    for s in samples:
        store.insert(s.t, s.x)
    assert len(store) == 100
    assert store.footprint_64bit() == 200
    assert all(store.read(s.t) == s.x for s in samples)
    assert store.read(0.5) == pytest.approx((samples[0].x + samples[1].x) / 2)
    assert store.spans() == []


# ---------------------------------------------------------------------------
# FlairStore
# ---------------------------------------------------------------------------


def test_flair_store_matches_direct_model() -> None:
    samples = gen_random(500, seed=2)
    store = FlairStore(10.0)
    model = FlairModel(10.0)
    for s in samples:
        store.insert(s.t, s.x)
        model.insert(s.t, s.x)
    assert store.model == model
    assert store.footprint_64bit() == model.footprint_64bit()


def test_flair_spans_follow_breakpoints() -> None:
    store = FlairStore(1.0)
    for s in [Sample(0, 0), Sample(1, 0), Sample(2, 10), Sample(3, 20)]:
        store.insert(s.t, s.x)
    # Segments start at sample 0 and at the persisted sample 1.
    assert store.spans() == [(1, 1), (3, 2)]


def test_flair_spans_of_piecewise_stream() -> None:
    store = FlairStore(1e-6)
    for s in gen_piecewise_linear(300, 3, seed=4):
        store.insert(s.t, s.x)
    assert store.spans() == [(100, 100.0), (100, 100.0), (100, 99.0)]


def test_flair_spans_constant_stream() -> None:
    store = FlairStore(0.01)
    for s in gen_constant(1_000, 1.0):
        store.insert(s.t, s.x)
    assert store.spans() == [(1_000, 999.0)]
    assert FlairStore(0.01).spans() == []


def test_poly_spans_sum_to_stream_length() -> None:
    store = PolyStore(0.5)
    for s in gen_random(120, seed=6):
        store.insert(s.t, s.x)
    assert sum(n for n, _ in store.spans()) == 120
