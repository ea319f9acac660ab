from __future__ import annotations

import numpy as np
import pytest

from flair_stream.errors import DegeneratePath, InvalidParameter, TraceTooShort
from flair_stream.generators import gen_straight
from flair_stream.geo import GeoPoint, GeoTrace, destination, haversine, path_length
from flair_stream.promesse import PromesseParams, promesse
from flair_stream.stays import poi_attack


def gaps(trace: GeoTrace) -> list[float]:
    return [haversine(p.latlon, q.latlon) for p, q in zip(trace, trace[1:])]


def test_points_are_delta_apart(two_dwell_case) -> None:
    trace = two_dwell_case.trace
    out = promesse(trace, PromesseParams(200.0))
    inner = gaps(out)[:-1]
    assert inner
    assert all(abs(g - 200.0) <= 1e-6 for g in inner)
    assert 0.0 < gaps(out)[-1] <= 200.0 + 1e-6


def test_endpoints_and_uniform_timestamps(two_dwell_case) -> None:
    trace = two_dwell_case.trace
    out = promesse(trace, PromesseParams(200.0))
    assert out[0] == trace[0]
    assert out[-1].latlon == trace[-1].latlon
    assert (out[0].t, out[-1].t) == (trace[0].t, trace[-1].t)
    steps = np.diff(out.timestamps)
    assert steps == pytest.approx(np.full(len(steps), steps[0]))


def test_protection_hides_dwells(two_dwell_case, attack_params) -> None:
    trace = two_dwell_case.trace
    assert len(poi_attack(trace, attack_params).pois) == 2
    out = promesse(trace, PromesseParams(200.0))
    # Uniform speed: each 200 m step takes far less than t_min.
    assert poi_attack(out, attack_params).pois == []
    assert poi_attack(out, attack_params, "divided").pois == []


def test_straight_path_on_meridian_is_resampled_exactly() -> None:
    trace = gen_straight(101, speed_mps=10.0)
    out = promesse(trace, PromesseParams(100.0))
    # 1000 m in 100 m steps lands exactly on the endpoint.
    assert len(out) == 11
    assert all(abs(g - 100.0) <= 1e-6 for g in gaps(out))
    assert [p.lon for p in out] == pytest.approx([trace[0].lon] * 11)
    again = promesse(out, PromesseParams(100.0))
    assert len(again) == len(out)
    for p, q in zip(again, out):
        assert haversine(p.latlon, q.latlon) <= 1e-6
        assert p.t == pytest.approx(q.t)


def test_short_final_leg_keeps_endpoint() -> None:
    origin = (45.0, 4.0)
    trace = GeoTrace(
        [GeoPoint(0.0, *origin), GeoPoint(60.0, *destination(origin, 0.0, 250.0))]
    )
    out = promesse(trace, PromesseParams(100.0))
    assert len(out) == 4
    assert gaps(out)[-1] == pytest.approx(50.0, abs=1e-6)
    assert out.timestamps == [0.0, 20.0, 40.0, 60.0]


def test_output_length_tracks_path_length(two_dwell_case) -> None:
    trace = two_dwell_case.trace
    out = promesse(trace, PromesseParams(500.0))
    assert path_length(out) <= path_length(trace) + 1e-6
    assert 2 <= len(out) <= path_length(trace) / 500.0 + 2


def test_promesse_errors() -> None:
    point = GeoPoint(0.0, 45.0, 4.0)
    with pytest.raises(TraceTooShort):
        promesse(GeoTrace([point]), PromesseParams())
    with pytest.raises(DegeneratePath):
        promesse(GeoTrace([point, GeoPoint(10.0, 45.0, 4.0)]), PromesseParams())
    with pytest.raises(DegeneratePath, match="shorter than delta"):
        promesse(gen_straight(3, speed_mps=1.0), PromesseParams(200.0))
    with pytest.raises(InvalidParameter, match="delta"):
        PromesseParams(0.0)
