"""Promesse: constant-speed trace smoothing with fixed spatial spacing."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from flair_stream.errors import DegeneratePath, InvalidParameter, TraceTooShort
from flair_stream.geo import GeoPoint, GeoTrace, LatLon, haversine, intermediate, path_length
from flair_stream.settings import DEFAULT_DELTA

logger = logging.getLogger(__name__)

# Emitted points closer than this to the endpoint are replaced by it.
COINCIDENT_M = 1e-6


@dataclass(frozen=True, slots=True)
class PromesseParams:
    delta: float = DEFAULT_DELTA

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise InvalidParameter(f"delta must be > 0, got {self.delta!r}")


def promesse(trace: Sequence[GeoPoint], params: PromesseParams) -> GeoTrace:
    """Re-emit the trace as points delta meters apart at uniform time steps.

    Walking the input in order, while the current input point is at least
    delta from the last emitted point, the point at distance delta towards
    it is emitted. The input endpoint closes the output. First and last
    timestamps are kept; the others are evenly spaced between them.
    """
    if len(trace) < 2:
        raise TraceTooShort(f"need at least 2 points, got {len(trace)}")
    delta = params.delta
    length = path_length(trace)
    if length == 0.0 or length < delta:
        raise DegeneratePath(f"path length {length:.3f} m is shorter than delta {delta} m")

    emitted: list[LatLon] = [trace[0].latlon]
    last = emitted[0]
    for point in trace[1:]:
        target = point.latlon
        remaining = haversine(last, target)
        while remaining >= delta:
            last = intermediate(last, target, delta / remaining)
            emitted.append(last)
            remaining = haversine(last, target)

    end = trace[-1].latlon
    if haversine(last, end) <= COINCIDENT_M and len(emitted) > 1:
        emitted[-1] = end
    else:
        emitted.append(end)

    times = np.linspace(trace[0].t, trace[-1].t, len(emitted))
    logger.debug("Promesse: %d points in, %d out, delta=%s m", len(trace), len(emitted), delta)
    return GeoTrace(
        GeoPoint(float(t), lat, lon) for t, (lat, lon) in zip(times, emitted)
    )
