from __future__ import annotations

import pytest

from flair_stream.errors import NonMonotonicTimestamp
from flair_stream.generators import gen_straight
from flair_stream.geo import GeoPoint
from flair_stream.stays import poi_attack
from flair_stream.trace_store import TraceStore


def test_replay_is_epsilon_close(two_dwell_case) -> None:
    trace = two_dwell_case.trace
    store = TraceStore.from_trace(trace, epsilon=1e-4)
    assert len(store) == len(trace)
    for point in trace:
        lat, lon = store.read(point.t)
        assert abs(lat - point.lat) <= 1e-4 + 1e-12
        assert abs(lon - point.lon) <= 1e-4 + 1e-12
    replayed = store.replay(trace.timestamps)
    assert replayed.timestamps == trace.timestamps


def test_modeled_trace_keeps_pois(two_dwell_case, attack_params) -> None:
    trace = two_dwell_case.trace
    # 1e-5 degrees is about a meter.
    store = TraceStore.from_trace(trace, epsilon=1e-5)
    modeled = store.replay(trace.timestamps)
    assert len(poi_attack(modeled, attack_params).pois) == 2


def test_straight_trace_compresses_to_a_few_floats() -> None:
    store = TraceStore.from_trace(gen_straight(1_000), epsilon=1e-6)
    assert store.raw_footprint_64bit() == 3_000
    assert store.footprint_64bit() < 30
    assert store.gain_pct() > 99.0


def test_empty_store() -> None:
    store = TraceStore()
    assert len(store) == 0
    assert store.footprint_64bit() == 10
    assert store.gain_pct() == 0.0


def test_reads_are_clamped_to_valid_coordinates() -> None:
    store = TraceStore(epsilon=0.5)
    for t, lat in enumerate([89.9, 90.0, 89.9, 90.0]):
        store.insert(GeoPoint(float(t), lat, 0.0))
    assert all(-90.0 <= store.read(t)[0] <= 90.0 for t in (0.5, 1.0, 10.0))


def test_insert_rejects_out_of_order_point() -> None:
    store = TraceStore()
    store.insert(GeoPoint(5.0, 45.0, 4.0))
    with pytest.raises(NonMonotonicTimestamp):
        store.insert(GeoPoint(5.0, 45.0, 4.0))
