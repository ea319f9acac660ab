"""Store interface shared by the harness: raw, flair, swab and poly stores."""

from __future__ import annotations

import bisect
import math
from collections.abc import Callable
from typing import Protocol

from flair_stream.errors import (
    EmptyModel,
    NonFiniteSample,
    NonMonotonicTimestamp,
    TimestampBeforeHistory,
    UnknownStore,
)
from flair_stream.flair import FlairModel
from flair_stream.polynomial import PolyStore
from flair_stream.segmentation import SwabStore
from flair_stream.settings import DEFAULT_POLY_MAX_DEGREE, DEFAULT_SWAB_WINDOW


class Store(Protocol):
    name: str

    def insert(self, t: float, x: float) -> object: ...

    def read(self, t: float) -> float: ...

    def footprint_64bit(self) -> int: ...

    def finalize(self) -> object: ...

    def spans(self) -> list[tuple[int, float]]:
        """(samples covered, duration) per model, in time order."""
        ...


class RawStore:
    """Lossless baseline: every sample kept, two 64-bit values each."""

    name = "raw"

    def __init__(self) -> None:
        self.ts: list[float] = []
        self.xs: list[float] = []

    def __len__(self) -> int:
        return len(self.ts)

    def insert(self, t: float, x: float) -> None:
        if not (math.isfinite(t) and math.isfinite(x)):
            raise NonFiniteSample(f"sample ({t!r}, {x!r}) is not finite")
        if self.ts and t <= self.ts[-1]:
            raise NonMonotonicTimestamp(
                f"timestamp {t!r} is not after the last inserted timestamp {self.ts[-1]!r}"
            )
        self.ts.append(t)
        self.xs.append(x)

    def read(self, t: float) -> float:
        """Exact value at a stored timestamp, linear interpolation between them."""
        ts = self.ts
        if not ts:
            raise EmptyModel("cannot read from an empty raw store")
        if t < ts[0]:
            raise TimestampBeforeHistory(
                f"timestamp {t!r} precedes the first stored timestamp {ts[0]!r}"
            )
        k = bisect.bisect_right(ts, t) - 1
        if ts[k] == t or k == len(ts) - 1:
            return self.xs[k]
        gradient = (self.xs[k + 1] - self.xs[k]) / (ts[k + 1] - ts[k])
        return self.xs[k] + gradient * (t - ts[k])

    def footprint_64bit(self) -> int:
        return 2 * len(self.ts)

    def finalize(self) -> None:
        pass

    def spans(self) -> list[tuple[int, float]]:
        return []


class FlairStore:
    """FlairModel behind the store interface, tracking where each segment starts."""

    name = "flair"

    def __init__(self, epsilon: float) -> None:
        self.model = FlairModel(epsilon)
        self._starts: list[int] = []

    def insert(self, t: float, x: float) -> None:
        count = self.model.count_inserted
        if self.model.insert(t, x):
            # The persisted breakpoint is the previously inserted sample.
            self._starts.append(count - 1)
        elif count == 0:
            self._starts.append(0)

    def read(self, t: float) -> float:
        return self.model.read(t)

    def footprint_64bit(self) -> int:
        return self.model.footprint_64bit()

    def finalize(self) -> None:
        pass

    def spans(self) -> list[tuple[int, float]]:
        model = self.model
        last = model.last
        if last is None:
            return []
        ts = [s.t for s in model.history]
        bounds = self._starts + [model.count_inserted]
        ends = ts[1:] + [last.t]
        return [
            (bounds[k + 1] - bounds[k], ends[k] - ts[k]) for k in range(len(self._starts))
        ]


def _flair(epsilon: float, **_: object) -> FlairStore:
    return FlairStore(epsilon)


def _swab(epsilon: float, *, window: int = DEFAULT_SWAB_WINDOW, **_: object) -> SwabStore:
    return SwabStore(epsilon, window)


def _poly(
    epsilon: float, *, max_degree: int = DEFAULT_POLY_MAX_DEGREE, **_: object
) -> PolyStore:
    return PolyStore(epsilon, max_degree)


def _raw(epsilon: float, **_: object) -> RawStore:
    return RawStore()


STORES: dict[str, Callable[..., Store]] = {
    "flair": _flair,
    "swab": _swab,
    "poly": _poly,
    "raw": _raw,
}


def make_store(name: str, epsilon: float, **options: object) -> Store:
    factory = STORES.get(name)
    if factory is None:
        raise UnknownStore(
            f"Unknown store '{name}'. Available: {', '.join(STORES)}"
        )
    return factory(epsilon, **options)
