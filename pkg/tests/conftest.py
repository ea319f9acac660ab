"""Shared oracles: raw-copy read-back check and brute-force stay check."""

from __future__ import annotations

from collections.abc import Sequence

import pytest

from flair_stream.flair import Sample
from flair_stream.generators import DwellSpec, MobilityCase, gen_mobility
from flair_stream.geo import GeoPoint, distance
from flair_stream.stays import AttackParams, Stay


def read_errors(reader, samples: Sequence[Sample]) -> list[float]:
    """|read(t) - x| for every retained raw sample."""
    return [abs(reader.read(s.t) - s.x) for s in samples]


def assert_epsilon_sound(reader, samples: Sequence[Sample], epsilon: float) -> None:
    # Float slack: a few ulps of the largest magnitude involved.
    scale = max([1.0] + [abs(s.x) for s in samples] + [abs(s.t) for s in samples])
    bound = epsilon + 1e-12 * scale
    worst = max(read_errors(reader, samples), default=0.0)
    assert worst <= bound, f"read-back error {worst!r} exceeds epsilon {epsilon!r}"


def assert_valid_stay(trace: Sequence[GeoPoint], stay: Stay, params: AttackParams) -> None:
    members = [trace[k] for k in range(stay.i_first, stay.i_last + 1)]
    anchor = members[0]
    assert stay.support == len(members)
    assert stay.t_start == anchor.t
    assert stay.t_end == members[-1].t
    assert stay.duration >= params.t_min
    assert all(distance(anchor, p) <= params.d_max for p in members)
    assert stay.lat == pytest.approx(sum(p.lat for p in members) / len(members))
    assert stay.lon == pytest.approx(sum(p.lon for p in members) / len(members))


@pytest.fixture
def two_dwell_case() -> MobilityCase:
    """Two 1 h dwells 50 km apart.

    Transit points are 250 m apart, so none falls within d_max of a dwell.
    """
    (case,) = gen_mobility(1, DwellSpec(transit_m=50_000.0, transit_period_s=12.5), seed=7)
    return case


@pytest.fixture
def attack_params() -> AttackParams:
    return AttackParams(t_min=900.0, d_max=200.0, s_max=64)
