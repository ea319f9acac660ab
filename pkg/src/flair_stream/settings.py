"""Defaults shared by the library, the harness and the CLI."""

from __future__ import annotations

import os

LOG_LEVEL = os.environ.get("FLAIR_LOG_LEVEL", "INFO").upper()

# Univariate benchmarks use 1e-2, location workloads 1e-3.
DEFAULT_EPSILON = 1e-2
DEFAULT_GEO_EPSILON = 1e-3

DEFAULT_T_MIN = 900.0
DEFAULT_D_MAX = 200.0
DEFAULT_S_MAX = 256
DEFAULT_DELTA = 200.0

DEFAULT_SWAB_WINDOW = 512
DEFAULT_POLY_MAX_DEGREE = 14

CHECKPOINT_EVERY = 10_000
TIMING_BATCH = 10_000
THROUGHPUT_REPEATS = 4
POLY_INSERT_CAP = 10_000

EARTH_RADIUS_M = 6_371_000.0
ZERO_DRIFT_FLOOR = 1e-9
