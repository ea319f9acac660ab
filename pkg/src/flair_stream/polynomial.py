"""Online polynomial store with degree escalation.

Each piece is a numpy Polynomial fitted on a normalised time domain. A new
sample that the current piece predicts within epsilon extends it. Otherwise
the degree is raised one step at a time: a degree-k candidate is fitted to
k points regenerated from the current piece plus the new sample, and is
accepted when it reproduces all of them within epsilon / 2**k. Past the
maximum degree the piece is persisted and a fresh degree-0 piece starts at
the sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from flair_stream.errors import (
    EmptyModel,
    InvalidParameter,
    NonFiniteSample,
    NonMonotonicTimestamp,
    TimestampBeforeHistory,
)
from flair_stream.flair import check_epsilon
from flair_stream.settings import DEFAULT_POLY_MAX_DEGREE


@dataclass(slots=True)
class PolyPiece:
    t_start: float
    t_end: float
    poly: Polynomial
    x_offset: float
    x_scale: float
    degree: int
    n_samples: int
    fit_error: float = 0.0

    def value(self, t: float) -> float:
        return self.x_offset + self.x_scale * float(self.poly(t))

    def values(self, ts: np.ndarray) -> np.ndarray:
        return self.x_offset + self.x_scale * self.poly(ts)


def _constant_piece(t: float, x: float) -> PolyPiece:
    return PolyPiece(t, t, Polynomial([0.0]), x, 1.0, 0, 1)


def _fit(ts: np.ndarray, xs: np.ndarray, degree: int) -> tuple[Polynomial, float, float, float]:
    offset = float(xs.mean())
    scale = float(np.max(np.abs(xs - offset)))
    if scale == 0.0:
        scale = 1.0
    poly = Polynomial.fit(ts, (xs - offset) / scale, degree)
    error = float(np.max(np.abs(offset + scale * poly(ts) - xs)))
    return poly, offset, scale, error


class PolyStore:
    name = "poly"

    def __init__(self, epsilon: float, max_degree: int = DEFAULT_POLY_MAX_DEGREE) -> None:
        self.epsilon = check_epsilon(epsilon)
        if max_degree < 0:
            raise InvalidParameter(f"max_degree must be >= 0, got {max_degree}")
        self.max_degree = max_degree
        self.pieces: list[PolyPiece] = []
        self.current: PolyPiece | None = None

    def insert(self, t: float, x: float) -> None:
        if not (math.isfinite(t) and math.isfinite(x)):
            raise NonFiniteSample(f"sample ({t!r}, {x!r}) is not finite")
        cur = self.current
        if cur is None:
            self.current = _constant_piece(t, x)
            return
        if t <= cur.t_end:
            raise NonMonotonicTimestamp(
                f"timestamp {t!r} is not after the last inserted timestamp {cur.t_end!r}"
            )
        if abs(cur.value(t) - x) <= self.epsilon:
            cur.t_end = t
            cur.n_samples += 1
            return

        for k in range(cur.degree + 1, self.max_degree + 1):
            if k == 1:
                regen_t = np.array([cur.t_start])
            elif cur.t_end == cur.t_start:
                break
            else:
                regen_t = np.linspace(cur.t_start, cur.t_end, k)
            ts = np.append(regen_t, t)
            xs = np.append(cur.values(regen_t), x)
            poly, offset, scale, error = _fit(ts, xs, k)
            if error <= self.epsilon / 2**k:
                self.current = PolyPiece(
                    cur.t_start, t, poly, offset, scale, k, cur.n_samples + 1, error
                )
                return

        self.pieces.append(cur)
        self.current = _constant_piece(t, x)

    def finalize(self) -> None:
        """Pieces are already persisted on the fly; nothing to flush."""

    def _all(self) -> list[PolyPiece]:
        return self.pieces + ([self.current] if self.current is not None else [])

    def read(self, t: float) -> float:
        pieces = self._all()
        if not pieces:
            raise EmptyModel("cannot read from an empty polynomial store")
        if t < pieces[0].t_start:
            raise TimestampBeforeHistory(
                f"timestamp {t!r} precedes the first modeled timestamp {pieces[0].t_start!r}"
            )
        # A timestamp in the gap before the next piece extends the earlier one.
        for piece, following in zip(pieces, pieces[1:]):
            if t < following.t_start:
                return piece.value(t)
        return pieces[-1].value(t)

    def footprint_64bit(self) -> int:
        """t_start, t_end, domain end, offset and scale, plus d+1 coefficients."""
        return sum(5 + p.degree + 1 for p in self._all())

    def spans(self) -> list[tuple[int, float]]:
        return [(p.n_samples, p.t_end - p.t_start) for p in self._all()]
