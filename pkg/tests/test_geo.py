from __future__ import annotations

import math

import numpy as np
import pytest

from flair_stream.errors import InvalidCoordinate, NonMonotonicTimestamp
from flair_stream.geo import (
    GeoPoint,
    GeoTrace,
    destination,
    haversine,
    intermediate,
    path_length,
)
from flair_stream.settings import EARTH_RADIUS_M


def test_haversine_identical_points() -> None:
    assert haversine((45.0, 4.0), (45.0, 4.0)) == 0.0


def test_haversine_one_degree_on_equator() -> None:
    assert haversine((0.0, 0.0), (0.0, 1.0)) == pytest.approx(math.pi * EARTH_RADIUS_M / 180)
    assert haversine((0.0, 0.0), (0.0, 1.0)) == pytest.approx(111_195, abs=1)


def test_haversine_is_symmetric() -> None:
    rng = np.random.default_rng(0)
    for _ in range(200):
        a = (rng.uniform(-90, 90), rng.uniform(-180, 180))
        b = (rng.uniform(-90, 90), rng.uniform(-180, 180))
        assert haversine(a, b) == pytest.approx(haversine(b, a))
        assert haversine(a, b) >= 0.0


def test_intermediate_splits_distance() -> None:
    a, b = (45.76, 4.84), (45.80, 4.90)
    mid = intermediate(a, b, 0.25)
    total = haversine(a, b)
    assert haversine(a, mid) == pytest.approx(0.25 * total, abs=1e-6)
    assert haversine(mid, b) == pytest.approx(0.75 * total, abs=1e-6)
    assert intermediate(a, a, 0.5) == a


def test_destination_distance_and_bearing() -> None:
    origin = (45.0, 4.0)
    north = destination(origin, 0.0, 1_000.0)
    assert haversine(origin, north) == pytest.approx(1_000.0, abs=1e-6)
    assert north[1] == pytest.approx(origin[1])
    assert north[0] > origin[0]


def test_geo_point_validation() -> None:
    with pytest.raises(InvalidCoordinate, match="latitude"):
        GeoPoint(0.0, 91.0, 0.0)
    with pytest.raises(InvalidCoordinate, match="longitude"):
        GeoPoint(0.0, 0.0, -180.5)
    with pytest.raises(InvalidCoordinate, match="timestamp"):
        GeoPoint(math.nan, 0.0, 0.0)


def test_geo_trace_validation() -> None:
    with pytest.raises(NonMonotonicTimestamp):
        GeoTrace([GeoPoint(1.0, 0.0, 0.0), GeoPoint(1.0, 0.0, 0.0)])
    with pytest.raises(InvalidCoordinate, match="antimeridian"):
        GeoTrace([GeoPoint(0.0, 0.0, 179.9), GeoPoint(1.0, 0.0, -179.9)])


def test_geo_trace_sequence_behaviour() -> None:
    trace = GeoTrace(GeoPoint(float(t), 0.0, 0.001 * t) for t in range(5))
    assert len(trace) == 5
    assert trace[1:3] == GeoTrace([trace[1], trace[2]])
    assert trace.timestamps == [0.0, 1.0, 2.0, 3.0, 4.0]
    assert path_length(trace) == pytest.approx(haversine((0.0, 0.0), (0.0, 0.004)))
