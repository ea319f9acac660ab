"""Mobility-trace types and great-circle geometry: haversine, intermediate, path_length."""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from flair_stream.errors import InvalidCoordinate, NonMonotonicTimestamp
from flair_stream.settings import EARTH_RADIUS_M

LatLon = tuple[float, float]


@dataclass(frozen=True, slots=True)
class GeoPoint:
    t: float
    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.t):
            raise InvalidCoordinate(f"timestamp {self.t!r} is not finite")
        if not (-90.0 <= self.lat <= 90.0):
            raise InvalidCoordinate(f"latitude {self.lat!r} outside [-90, 90]")
        if not (-180.0 <= self.lon <= 180.0):
            raise InvalidCoordinate(f"longitude {self.lon!r} outside [-180, 180]")

    @property
    def latlon(self) -> LatLon:
        return (self.lat, self.lon)


class GeoTrace(Sequence[GeoPoint]):
    """Time-ordered GPS points.

    Traces crossing the antimeridian are rejected: centroids are plain
    coordinate means.
    """

    __slots__ = ("points",)

    def __init__(self, points: Iterable[GeoPoint] = ()) -> None:
        self.points: tuple[GeoPoint, ...] = tuple(points)
        for k, (prev, cur) in enumerate(zip(self.points, self.points[1:]), start=1):
            if cur.t <= prev.t:
                raise NonMonotonicTimestamp(
                    f"point {k}: timestamp {cur.t!r} is not after {prev.t!r}"
                )
            if abs(cur.lon - prev.lon) > 180.0:
                raise InvalidCoordinate(f"point {k}: trace crosses the antimeridian")

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, index):  # type: ignore[override]
        if isinstance(index, slice):
            return GeoTrace(self.points[index])
        return self.points[index]

    def __iter__(self) -> Iterator[GeoPoint]:
        return iter(self.points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeoTrace):
            return NotImplemented
        return self.points == other.points

    def __repr__(self) -> str:
        return f"GeoTrace(<{len(self.points)} points>)"

    @property
    def timestamps(self) -> list[float]:
        return [p.t for p in self.points]


def haversine(a: LatLon, b: LatLon) -> float:
    """Great-circle distance in meters between two (lat, lon) pairs."""
    lat1, lon1, lat2, lon2 = map(math.radians, (a[0], a[1], b[0], b[1]))
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    return EARTH_RADIUS_M * 2 * math.atan2(math.sqrt(h), math.sqrt(max(0.0, 1 - h)))


def distance(p: GeoPoint, q: GeoPoint) -> float:
    return haversine(p.latlon, q.latlon)


def intermediate(a: LatLon, b: LatLon, fraction: float) -> LatLon:
    """Point at ``fraction`` of the way from a to b along the great circle."""
    lat1, lon1, lat2, lon2 = map(math.radians, (a[0], a[1], b[0], b[1]))
    angle = haversine(a, b) / EARTH_RADIUS_M
    if angle == 0.0:
        return a
    sin_angle = math.sin(angle)
    wa = math.sin((1 - fraction) * angle) / sin_angle
    wb = math.sin(fraction * angle) / sin_angle
    x = wa * math.cos(lat1) * math.cos(lon1) + wb * math.cos(lat2) * math.cos(lon2)
    y = wa * math.cos(lat1) * math.sin(lon1) + wb * math.cos(lat2) * math.sin(lon2)
    z = wa * math.sin(lat1) + wb * math.sin(lat2)
    lat = math.atan2(z, math.hypot(x, y))
    lon = math.atan2(y, x)
    return (math.degrees(lat), math.degrees(lon))


def destination(a: LatLon, bearing: float, meters: float) -> LatLon:
    """Point reached from a after ``meters`` along the initial bearing (radians)."""
    lat1, lon1 = math.radians(a[0]), math.radians(a[1])
    angle = meters / EARTH_RADIUS_M
    lat2 = math.asin(
        math.sin(lat1) * math.cos(angle) + math.cos(lat1) * math.sin(angle) * math.cos(bearing)
    )
    lon2 = lon1 + math.atan2(
        math.sin(bearing) * math.sin(angle) * math.cos(lat1),
        math.cos(angle) - math.sin(lat1) * math.sin(lat2),
    )
    return (math.degrees(lat2), math.degrees(lon2))


def path_length(trace: Sequence[GeoPoint]) -> float:
    return sum(distance(p, q) for p, q in zip(trace, trace[1:]))
