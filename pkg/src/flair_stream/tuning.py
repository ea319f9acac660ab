"""Epsilon tuning: drifts, nearest-rank percentiles, epsilon_candidates."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from flair_stream.errors import EmptyModel, NonMonotonicTimestamp, TooFewSamples
from flair_stream.flair import Sample
from flair_stream.settings import ZERO_DRIFT_FLOOR

CANDIDATE_PERCENTILES = (90, 95, 99)


@dataclass(frozen=True)
class DriftCdf:
    """Ascending drift values (value units per second)."""

    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    @property
    def count(self) -> int:
        return len(self.values)

    def percentile(self, p: float) -> float:
        """Nearest rank: the ceil(p/100 * N)-th smallest value."""
        if not len(self.values):
            raise EmptyModel("drift distribution is empty")
        rank = max(1, math.ceil(p / 100 * len(self.values)))
        return float(self.values[rank - 1])

    def rows(self) -> list[tuple[float, float]]:
        """(drift, cumulative fraction) pairs for plotting."""
        n = len(self.values)
        return [(float(v), (i + 1) / n) for i, v in enumerate(self.values)]


def drifts(samples: Sequence[Sample]) -> DriftCdf:
    if len(samples) < 2:
        raise TooFewSamples(f"need at least 2 samples to compute drifts, got {len(samples)}")
    t = np.array([s.t for s in samples], dtype=np.float64)
    x = np.array([s.x for s in samples], dtype=np.float64)
    dt = np.diff(t)
    if np.any(dt <= 0):
        raise NonMonotonicTimestamp("timestamps must be strictly increasing")
    return DriftCdf(np.sort(np.abs(np.diff(x)) / dt))


def epsilon_candidates(cdf: DriftCdf) -> tuple[float, float, float]:
    """Drift percentiles at 90/95/99, floored to a strictly positive value."""
    if not cdf.count:
        raise EmptyModel("drift distribution is empty")
    positive = cdf.values[cdf.values > 0]
    floor = float(positive[0]) if len(positive) else ZERO_DRIFT_FLOOR
    c90, c95, c99 = (cdf.percentile(p) or floor for p in CANDIDATE_PERCENTILES)
    return (c90, c95, c99)
