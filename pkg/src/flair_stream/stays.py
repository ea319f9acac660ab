"""POI attack: get_stays, divided_stay, merge_stays, poi_attack."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Literal

from flair_stream.errors import EmptyWindow, IndexOutOfRange, InvalidParameter
from flair_stream.geo import GeoPoint, distance, haversine
from flair_stream.settings import DEFAULT_D_MAX, DEFAULT_S_MAX, DEFAULT_T_MIN

logger = logging.getLogger(__name__)

Engine = Literal["linear", "divided"]


@dataclass(frozen=True, slots=True)
class AttackParams:
    t_min: float = DEFAULT_T_MIN
    d_max: float = DEFAULT_D_MAX
    s_max: int = DEFAULT_S_MAX
    merge_radius: float | None = None

    def __post_init__(self) -> None:
        if not self.t_min > 0:
            raise InvalidParameter(f"t_min must be > 0, got {self.t_min!r}")
        if not self.d_max > 0:
            raise InvalidParameter(f"d_max must be > 0, got {self.d_max!r}")
        if self.s_max < 2:
            raise InvalidParameter(f"s_max must be >= 2, got {self.s_max!r}")
        if self.merge_radius is not None and not self.merge_radius > 0:
            raise InvalidParameter(f"merge_radius must be > 0, got {self.merge_radius!r}")

    @property
    def radius(self) -> float:
        return self.d_max if self.merge_radius is None else self.merge_radius


@dataclass(frozen=True, slots=True)
class Stay:
    lat: float
    lon: float
    t_start: float
    t_end: float
    support: int
    i_first: int = 0
    i_last: int = 0

    @property
    def centroid(self) -> tuple[float, float]:
        return (self.lat, self.lon)

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start


@dataclass(frozen=True, slots=True)
class Poi:
    lat: float
    lon: float
    stays: tuple[Stay, ...]

    @property
    def centroid(self) -> tuple[float, float]:
        return (self.lat, self.lon)

    @property
    def n_stays(self) -> int:
        return len(self.stays)

    @property
    def t_total_seconds(self) -> float:
        return sum(s.duration for s in self.stays)

    def to_dict(self) -> dict:
        return {
            "lat": self.lat,
            "lon": self.lon,
            "n_stays": self.n_stays,
            "t_total_seconds": self.t_total_seconds,
        }


@dataclass(slots=True)
class AttackResult:
    pois: list[Poi]
    stays: list[Stay]
    visited: int
    leaves: list[tuple[int, int]] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Stay extraction
# ---------------------------------------------------------------------------


def _window(n: int, i_first: int, i_last: int | None) -> tuple[int, int]:
    if n == 0:
        raise EmptyWindow("cannot extract stays from an empty trace")
    if i_last is None:
        i_last = n - 1
    if not (0 <= i_first < n and 0 <= i_last < n):
        raise IndexOutOfRange(f"window [{i_first}, {i_last}] outside trace of {n} points")
    if i_first > i_last:
        raise EmptyWindow(f"window [{i_first}, {i_last}] is empty")
    return i_first, i_last


def get_stays(
    trace: Sequence[GeoPoint],
    params: AttackParams,
    i_first: int = 0,
    i_last: int | None = None,
) -> list[Stay]:
    """Anchor scan over trace[i_first..i_last] (inclusive)."""
    i, i_last = _window(len(trace), i_first, i_last)
    stays: list[Stay] = []
    while i <= i_last:
        anchor = trace[i]
        j = i + 1
        while j <= i_last and distance(anchor, trace[j]) <= params.d_max:
            j += 1
        end = trace[j - 1]
        if end.t - anchor.t >= params.t_min:
            members = [trace[k] for k in range(i, j)]
            stays.append(
                Stay(
                    lat=sum(p.lat for p in members) / len(members),
                    lon=sum(p.lon for p in members) / len(members),
                    t_start=anchor.t,
                    t_end=end.t,
                    support=len(members),
                    i_first=i,
                    i_last=j - 1,
                )
            )
            i = j
        else:
            i += 1
    return stays


def _discardable(a: GeoPoint, b: GeoPoint, params: AttackParams) -> bool:
    """More than d_max travelled in no more than t_min: no stay fits between."""
    return distance(a, b) > params.d_max and b.t - a.t <= params.t_min


def plan_leaves(
    trace: Sequence[GeoPoint],
    params: AttackParams,
    i_first: int = 0,
    i_last: int | None = None,
) -> list[tuple[int, int]]:
    """Windows that survive the divided_stay recursion, in time order."""
    i_first, i_last = _window(len(trace), i_first, i_last)
    leaves: list[tuple[int, int]] = []

    def split(a: int, b: int) -> None:
        if b - a <= params.s_max:
            leaves.append((a, b))
            return
        mid = (a + b) // 2
        for lo, hi in ((a, mid), (mid, b)):
            if _discardable(trace[lo], trace[hi], params):
                logger.debug("Discarding window [%d, %d]", lo, hi)
                continue
            split(lo, hi)

    split(i_first, i_last)
    return leaves


def divided_stay(
    trace: Sequence[GeoPoint],
    params: AttackParams,
    i_first: int = 0,
    i_last: int | None = None,
    *,
    executor: Executor | None = None,
) -> list[Stay]:
    leaves = plan_leaves(trace, params, i_first, i_last)
    return _stays_over(trace, params, leaves, executor)


def _stays_over(
    trace: Sequence[GeoPoint],
    params: AttackParams,
    leaves: list[tuple[int, int]],
    executor: Executor | None,
) -> list[Stay]:
    if executor is None:
        per_leaf = [get_stays(trace, params, a, b) for a, b in leaves]
    else:
        per_leaf = list(executor.map(lambda w: get_stays(trace, params, *w), leaves))
    return [stay for stays in per_leaf for stay in stays]


# ---------------------------------------------------------------------------
# Merge
# ---------------------------------------------------------------------------


@dataclass(slots=True)
class _Cluster:
    lat: float
    lon: float
    weight: int
    t_start: float
    stays: list[Stay]

    @classmethod
    def of(cls, stay: Stay) -> _Cluster:
        return cls(stay.lat, stay.lon, stay.support, stay.t_start, [stay])

    def absorb(self, other: _Cluster) -> None:
        weight = self.weight + other.weight
        self.lat = (self.lat * self.weight + other.lat * other.weight) / weight
        self.lon = (self.lon * self.weight + other.lon * other.weight) / weight
        self.weight = weight
        self.t_start = min(self.t_start, other.t_start)
        self.stays = sorted(self.stays + other.stays, key=lambda s: s.t_start)


def merge_stays(stays: Sequence[Stay], merge_radius: float) -> list[Poi]:
    """Agglomerate closest-first while some pair of centroids is within merge_radius.

    Centroids are support-weighted means. Equidistant pairs are broken by the
    earlier t_start, then by position.
    """
    if not merge_radius > 0:
        raise InvalidParameter(f"merge_radius must be > 0, got {merge_radius!r}")
    clusters = [_Cluster.of(s) for s in stays]
    while len(clusters) > 1:
        best: tuple[float, float, int, int] | None = None
        for i in range(len(clusters)):
            ci = clusters[i]
            for j in range(i + 1, len(clusters)):
                cj = clusters[j]
                d = haversine((ci.lat, ci.lon), (cj.lat, cj.lon))
                if d > merge_radius:
                    continue
                key = (d, min(ci.t_start, cj.t_start), i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        _, _, i, j = best
        clusters[i].absorb(clusters.pop(j))
    return [Poi(c.lat, c.lon, tuple(c.stays)) for c in clusters]


# ---------------------------------------------------------------------------
# Attack
# ---------------------------------------------------------------------------


def poi_attack(
    trace: Sequence[GeoPoint],
    params: AttackParams,
    engine: Engine = "linear",
    *,
    executor: Executor | None = None,
) -> AttackResult:
    """Extract stays with the chosen engine and merge them into POIs."""
    if engine == "linear":
        leaves = [(0, len(trace) - 1)] if len(trace) else []
        stays = get_stays(trace, params)
    elif engine == "divided":
        leaves = plan_leaves(trace, params)
        stays = _stays_over(trace, params, leaves, executor)
    else:
        raise InvalidParameter(f"Unknown engine '{engine}'. Available: linear, divided")
    pois = merge_stays(stays, params.radius)
    visited = sum(b - a + 1 for a, b in leaves)
    logger.debug(
        "%s attack: %d stays, %d POIs, %d of %d indices visited",
        engine,
        len(stays),
        len(pois),
        visited,
        len(trace),
    )
    return AttackResult(pois, stays, visited, leaves)
