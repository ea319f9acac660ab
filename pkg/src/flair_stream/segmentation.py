"""Bottom-up segmentation and SWAB: the linear-interpolation competitors."""

from __future__ import annotations

import heapq
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from flair_stream.errors import (
    EmptyModel,
    InvalidParameter,
    NonFiniteSample,
    NonMonotonicTimestamp,
    TimestampBeforeHistory,
    TooFewSamples,
)
from flair_stream.flair import Sample, check_epsilon
from flair_stream.settings import DEFAULT_SWAB_WINDOW


@dataclass(frozen=True, slots=True)
class Segment:
    """Linear piece joining (t_start, x_start) to (t_end, x_end).

    n_samples counts the raw samples in [t_start, t_end); error is the largest
    absolute deviation of any covered raw sample from the piece.
    """

    t_start: float
    t_end: float
    x_start: float
    x_end: float
    n_samples: int
    error: float = 0.0

    def value(self, t: float) -> float:
        slope = (self.x_end - self.x_start) / (self.t_end - self.t_start)
        return self.x_start + slope * (t - self.t_start)


class SegmentList:
    """Contiguous, time-ordered linear pieces read by a sequential scan."""

    def __init__(self, segments: Sequence[Segment] = ()) -> None:
        self.segments: list[Segment] = list(segments)
        for prev, cur in zip(self.segments, self.segments[1:]):
            if prev.t_end != cur.t_start:
                raise ValueError(
                    f"segments are not contiguous at t={prev.t_end!r} / {cur.t_start!r}"
                )

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def read(self, t: float) -> float:
        if not self.segments:
            raise EmptyModel("cannot read from an empty segment list")
        if t < self.segments[0].t_start:
            raise TimestampBeforeHistory(
                f"timestamp {t!r} precedes the first segment {self.segments[0].t_start!r}"
            )
        for segment in self.segments:
            if t <= segment.t_end:
                return segment.value(t)
        return self.segments[-1].value(t)


# ---------------------------------------------------------------------------
# Bottom-up
# ---------------------------------------------------------------------------


def _merge_cost(t: np.ndarray, x: np.ndarray, a: int, c: int) -> float:
    """Max absolute deviation of samples a..c from the line joining a and c."""
    ts = t[a : c + 1]
    line = x[a] + (x[c] - x[a]) * (ts - t[a]) / (t[c] - t[a])
    return float(np.max(np.abs(line - x[a : c + 1])))


def _bottom_up_boundaries(
    t: np.ndarray, x: np.ndarray, epsilon: float
) -> tuple[list[int], list[float]]:
    """Return the surviving breakpoint indices and each piece's max deviation.

    Starts from one piece per consecutive pair and repeatedly removes the
    interior breakpoint whose removal yields the cheapest merged piece, while
    that cost stays <= epsilon. Ties go to the earlier breakpoint.
    """
    n = len(t)
    prev = list(range(-1, n - 1))
    nxt = list(range(1, n + 1))
    alive = [True] * n
    version = [0] * n
    errors = [0.0] * n  # errors[k]: deviation of the piece starting at breakpoint k

    # Initial costs: deviation of each interior sample from the chord over its neighbours.
    chord = x[:-2] + (x[2:] - x[:-2]) * (t[1:-1] - t[:-2]) / (t[2:] - t[:-2])
    costs = np.abs(chord - x[1:-1]).tolist()
    heap = [(cost, k, 0) for k, cost in enumerate(costs, start=1)]
    heapq.heapify(heap)
    while heap:
        cost, k, ver = heapq.heappop(heap)
        if not alive[k] or ver != version[k]:
            continue
        if cost > epsilon:
            break
        alive[k] = False
        p, q = prev[k], nxt[k]
        nxt[p] = q
        prev[q] = p
        errors[p] = cost
        for b in (p, q):
            if 0 < b < n - 1:
                version[b] += 1
                heapq.heappush(
                    heap, (_merge_cost(t, x, prev[b], nxt[b]), b, version[b])
                )

    bounds = [k for k in range(n) if alive[k]]
    return bounds, [errors[k] for k in bounds[:-1]]


def _check_stream(samples: Sequence[Sample]) -> tuple[np.ndarray, np.ndarray]:
    if len(samples) < 2:
        raise TooFewSamples(f"need at least 2 samples, got {len(samples)}")
    t = np.fromiter((s.t for s in samples), dtype=np.float64, count=len(samples))
    x = np.fromiter((s.x for s in samples), dtype=np.float64, count=len(samples))
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(x))):
        raise NonFiniteSample("samples must be finite")
    if np.any(np.diff(t) <= 0):
        raise NonMonotonicTimestamp("timestamps must be strictly increasing")
    return t, x


def _segments_from(
    t: np.ndarray, x: np.ndarray, bounds: list[int], errors: list[float]
) -> list[Segment]:
    return [
        Segment(float(t[a]), float(t[b]), float(x[a]), float(x[b]), b - a, err)
        for a, b, err in zip(bounds, bounds[1:], errors)
    ]


def bottom_up_segment(samples: Sequence[Sample], epsilon: float) -> SegmentList:
    """Offline bottom-up segmentation with max-deviation merge cost."""
    epsilon = check_epsilon(epsilon)
    t, x = _check_stream(samples)
    bounds, errors = _bottom_up_boundaries(t, x, epsilon)
    return SegmentList(_segments_from(t, x, bounds, errors))


# ---------------------------------------------------------------------------
# SWAB
# ---------------------------------------------------------------------------


class SwabStore:
    """Sliding window and bottom-up.

    The buffer holds at most ``window`` samples. Inserting into a full
    buffer runs bottom-up over it and emits the oldest piece; the piece's
    end sample stays buffered as the start of the next one. An emitted
    piece is folded into its predecessor when the joined line keeps both
    pieces' samples within epsilon.
    """

    name = "swab"

    def __init__(self, epsilon: float, window: int = DEFAULT_SWAB_WINDOW) -> None:
        self.epsilon = check_epsilon(epsilon)
        if window < 2:
            raise InvalidParameter(f"SWAB window must hold at least 2 samples, got {window}")
        self.window = window
        self.segments: list[Segment] = []
        self.flushes = 0
        self._buf_t: list[float] = []
        self._buf_x: list[float] = []
        self._pending: list[Segment] | None = None

    def insert(self, t: float, x: float) -> None:
        if not (math.isfinite(t) and math.isfinite(x)):
            raise NonFiniteSample(f"sample ({t!r}, {x!r}) is not finite")
        if self._buf_t and t <= self._buf_t[-1]:
            raise NonMonotonicTimestamp(
                f"timestamp {t!r} is not after the last inserted timestamp {self._buf_t[-1]!r}"
            )
        if len(self._buf_t) >= self.window:
            self._emit_oldest()
        self._buf_t.append(t)
        self._buf_x.append(x)
        self._pending = None

    def _emit_oldest(self) -> None:
        t = np.asarray(self._buf_t)
        x = np.asarray(self._buf_x)
        bounds, errors = _bottom_up_boundaries(t, x, self.epsilon)
        first = _segments_from(t, x, bounds[:2], errors[:1])[0]
        self._append(first)
        del self._buf_t[: bounds[1]]
        del self._buf_x[: bounds[1]]
        self.flushes += 1

    def _append(self, segment: Segment) -> None:
        if self.segments:
            prev = self.segments[-1]
            joined = Segment(
                prev.t_start,
                segment.t_end,
                prev.x_start,
                segment.x_end,
                prev.n_samples + segment.n_samples,
            )
            # The joined line departs from either piece by at most its gap at the shared point.
            gap = abs(joined.value(prev.t_end) - prev.x_end)
            error = max(prev.error, segment.error) + gap
            if error <= self.epsilon:
                self.segments[-1] = Segment(
                    joined.t_start,
                    joined.t_end,
                    joined.x_start,
                    joined.x_end,
                    joined.n_samples,
                    error,
                )
                return
        self.segments.append(segment)

    def _buffer_segments(self) -> list[Segment]:
        if self._pending is None:
            if len(self._buf_t) < 2:
                self._pending = []
            else:
                t = np.asarray(self._buf_t)
                x = np.asarray(self._buf_x)
                bounds, errors = _bottom_up_boundaries(t, x, self.epsilon)
                self._pending = _segments_from(t, x, bounds, errors)
        return self._pending

    def finalize(self) -> SegmentList:
        """Flush the buffer through bottom-up; the last sample stays buffered."""
        for segment in self._buffer_segments():
            self._append(segment)
        del self._buf_t[:-1]
        del self._buf_x[:-1]
        self._pending = None
        return SegmentList(self.segments)

    def read(self, t: float) -> float:
        if not self._buf_t:
            raise EmptyModel("cannot read from an empty SWAB store")
        first_t = self.segments[0].t_start if self.segments else self._buf_t[0]
        if t < first_t:
            raise TimestampBeforeHistory(
                f"timestamp {t!r} precedes the first modeled timestamp {first_t!r}"
            )
        for segment in self.segments:
            if t <= segment.t_end:
                return segment.value(t)
        pending = self._buffer_segments()
        for segment in pending:
            if t <= segment.t_end:
                return segment.value(t)
        if pending:
            return pending[-1].value(t)
        if self.segments and len(self._buf_t) == 1:
            return self.segments[-1].value(t)
        return self._buf_x[-1]

    def footprint_64bit(self) -> int:
        breakpoints = len(self.segments) + 1 if self.segments else 0
        shared = 1 if self.segments and self._buf_t else 0
        return 2 * breakpoints + 2 * (len(self._buf_t) - shared)

    def spans(self) -> list[tuple[int, float]]:
        spans = [(s.n_samples, s.t_end - s.t_start) for s in self.segments]
        if spans and len(self._buf_t) == 1:
            n, duration = spans[-1]
            spans[-1] = (n + 1, duration)
        return spans
