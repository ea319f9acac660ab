"""GPS trace storage as two FLAIR models, one per coordinate."""

from __future__ import annotations

from collections.abc import Iterable

from flair_stream.flair import FlairModel
from flair_stream.geo import GeoPoint, GeoTrace
from flair_stream.settings import DEFAULT_GEO_EPSILON


class TraceStore:
    """Latitude and longitude modeled independently over the same timestamps.

    Timestamps are kept by the caller, so the footprint counts the two
    models only; the raw baseline stores (t, lat, lon) per point.
    """

    def __init__(self, epsilon: float = DEFAULT_GEO_EPSILON) -> None:
        self.lat = FlairModel(epsilon)
        self.lon = FlairModel(epsilon)

    @classmethod
    def from_trace(cls, trace: Iterable[GeoPoint], epsilon: float = DEFAULT_GEO_EPSILON) -> TraceStore:
        store = cls(epsilon)
        for point in trace:
            store.insert(point)
        return store

    def __len__(self) -> int:
        return self.lat.count_inserted

    def insert(self, point: GeoPoint) -> None:
        self.lat.insert(point.t, point.lat)
        self.lon.insert(point.t, point.lon)

    def read(self, t: float) -> tuple[float, float]:
        # Reads can leave the valid range by up to epsilon near the poles or the antimeridian.
        lat = min(90.0, max(-90.0, self.lat.read(t)))
        lon = min(180.0, max(-180.0, self.lon.read(t)))
        return (lat, lon)

    def replay(self, timestamps: Iterable[float]) -> GeoTrace:
        return GeoTrace(GeoPoint(t, *self.read(t)) for t in timestamps)

    def footprint_64bit(self) -> int:
        return self.lat.footprint_64bit() + self.lon.footprint_64bit()

    def raw_footprint_64bit(self) -> int:
        return 3 * len(self)

    def gain_pct(self) -> float:
        raw = self.raw_footprint_64bit()
        if raw == 0:
            return 0.0
        return 100.0 * (1.0 - self.footprint_64bit() / raw)
