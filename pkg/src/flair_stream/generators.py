"""Seeded synthetic workloads: random, constant, piecewise-linear, sine, mobility."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from flair_stream.errors import InvalidParameter
from flair_stream.flair import Sample
from flair_stream.geo import GeoPoint, GeoTrace, LatLon, destination, intermediate

RANDOM_RANGE = (-1000.0, 1000.0)

# Traces are drawn around this point (Lyon).
BASE_LATLON = (45.76, 4.84)


def _check_n(n: int) -> None:
    if n < 0:
        raise InvalidParameter(f"n must be >= 0, got {n}")


def gen_random(n: int, seed: int = 0) -> list[Sample]:
    """Uniform values in [-1000, 1000] at unit-spaced timestamps."""
    _check_n(n)
    rng = np.random.default_rng(seed)
    values = rng.uniform(*RANDOM_RANGE, size=n)
    return [Sample(float(t), float(x)) for t, x in enumerate(values)]


def gen_constant(n: int, value: float = 0.0) -> list[Sample]:
    _check_n(n)
    return [Sample(float(t), float(value)) for t in range(n)]


def gen_linear(n: int, slope: float = 1.0, intercept: float = 0.0) -> list[Sample]:
    _check_n(n)
    return [Sample(float(t), intercept + slope * t) for t in range(n)]


def gen_piecewise_linear(n: int, n_knots: int = 3, seed: int = 0) -> list[Sample]:
    """Continuous polyline with n_knots pieces starting at multiples of n/n_knots.

    Slopes alternate in sign with magnitudes drawn from U(1, 5).
    """
    _check_n(n)
    if n_knots < 1:
        raise InvalidParameter(f"n_knots must be >= 1, got {n_knots}")
    rng = np.random.default_rng(seed)
    magnitudes = rng.uniform(1.0, 5.0, size=n_knots)
    sign = 1.0 if rng.random() < 0.5 else -1.0
    starts = [k * n // n_knots for k in range(n_knots)]
    samples: list[Sample] = []
    x_knot = 0.0
    for k, start in enumerate(starts):
        stop = starts[k + 1] if k + 1 < n_knots else n
        slope = sign * magnitudes[k] * (1 if k % 2 == 0 else -1)
        for i in range(start, stop):
            samples.append(Sample(float(i), x_knot + slope * (i - start)))
        x_knot += slope * (stop - start)
    return samples


def gen_sine(
    n: int, period: float = 100.0, amplitude: float = 1.0, seed: int = 0
) -> list[Sample]:
    _check_n(n)
    if not period > 0:
        raise InvalidParameter(f"period must be > 0, got {period!r}")
    rng = np.random.default_rng(seed)
    phase = rng.uniform(0.0, 2 * math.pi)
    t = np.arange(n, dtype=np.float64)
    values = amplitude * np.sin(2 * math.pi * t / period + phase)
    return [Sample(float(ti), float(x)) for ti, x in zip(t, values)]


STREAMS = {
    "random": lambda n, seed: gen_random(n, seed),
    "constant": lambda n, seed: gen_constant(n, 5.0),
    "linear": lambda n, seed: gen_linear(n, 0.5, 1.0),
    "piecewise": lambda n, seed: gen_piecewise_linear(n, 3, seed),
    "sine": lambda n, seed: gen_sine(n, seed=seed),
}


# ---------------------------------------------------------------------------
# Mobility
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class DwellSpec:
    n_dwells: int = 2
    dwell_seconds: float = 3600.0
    dwell_period_s: float = 30.0
    jitter_m: float = 20.0
    transit_m: float = 5000.0
    speed_mps: float = 20.0
    transit_period_s: float = 1.0

    def __post_init__(self) -> None:
        if self.n_dwells < 0:
            raise InvalidParameter(f"n_dwells must be >= 0, got {self.n_dwells}")
        for name in ("dwell_seconds", "dwell_period_s", "transit_m", "speed_mps", "transit_period_s"):
            if not getattr(self, name) > 0:
                raise InvalidParameter(f"{name} must be > 0, got {getattr(self, name)!r}")
        if self.jitter_m < 0:
            raise InvalidParameter(f"jitter_m must be >= 0, got {self.jitter_m!r}")


@dataclass(frozen=True, slots=True)
class MobilityCase:
    trace: GeoTrace
    centers: list[LatLon]
    dwell_spans: list[tuple[int, int]]


def _mobility_case(spec: DwellSpec, rng: np.random.Generator) -> MobilityCase:
    center = (
        BASE_LATLON[0] + rng.uniform(-0.05, 0.05),
        BASE_LATLON[1] + rng.uniform(-0.05, 0.05),
    )
    points: list[GeoPoint] = []
    centers: list[LatLon] = []
    spans: list[tuple[int, int]] = []
    t = 0.0
    n_dwell_points = max(1, round(spec.dwell_seconds / spec.dwell_period_s))
    step = spec.dwell_seconds / n_dwell_points
    transit_s = spec.transit_m / spec.speed_mps
    n_transit_steps = max(1, round(transit_s / spec.transit_period_s))

    for d in range(spec.n_dwells):
        centers.append(center)
        first = len(points)
        for k in range(n_dwell_points + 1):
            radius = spec.jitter_m * math.sqrt(rng.random())
            lat, lon = destination(center, rng.uniform(0.0, 2 * math.pi), radius)
            points.append(GeoPoint(t + k * step, lat, lon))
        spans.append((first, len(points) - 1))
        t = points[-1].t
        if d + 1 == spec.n_dwells:
            break
        following = destination(center, rng.uniform(0.0, 2 * math.pi), spec.transit_m)
        for k in range(1, n_transit_steps):
            lat, lon = intermediate(center, following, k / n_transit_steps)
            points.append(GeoPoint(t + k * transit_s / n_transit_steps, lat, lon))
        t += transit_s
        center = following

    return MobilityCase(GeoTrace(points), centers, spans)


def gen_mobility(n_traces: int, spec: DwellSpec | None = None, seed: int = 0) -> list[MobilityCase]:
    """Dwell-and-transit traces with their ground-truth dwell centers.

    Dwell points are i.i.d. uniform in a jitter_m disk around the center;
    transit legs run at constant speed along the great circle to the next
    center, in a uniformly random direction.
    """
    if n_traces < 0:
        raise InvalidParameter(f"n_traces must be >= 0, got {n_traces}")
    spec = spec or DwellSpec()
    rng = np.random.default_rng(seed)
    return [_mobility_case(spec, rng) for _ in range(n_traces)]


def gen_straight(n: int, speed_mps: float = 20.0, period_s: float = 1.0) -> GeoTrace:
    """Constant-speed northbound trace from the base location."""
    _check_n(n)
    return GeoTrace(
        GeoPoint(k * period_s, *destination(BASE_LATLON, 0.0, k * period_s * speed_mps))
        for k in range(n)
    )
