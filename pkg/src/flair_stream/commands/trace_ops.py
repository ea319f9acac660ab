"""Trace operations: attack, protect, audit."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Annotated, Literal

from flair_stream import csv_utils
from flair_stream.bench import poi_distances
from flair_stream.cli import cli, write_output
from flair_stream.promesse import PromesseParams, promesse
from flair_stream.settings import (
    DEFAULT_D_MAX,
    DEFAULT_DELTA,
    DEFAULT_GEO_EPSILON,
    DEFAULT_S_MAX,
    DEFAULT_T_MIN,
)
from flair_stream.stays import AttackParams, AttackResult, poi_attack
from flair_stream.trace_store import TraceStore

logger = logging.getLogger(__name__)


def _attack(trace, params: AttackParams, engine: str, parallel: bool) -> AttackResult:
    if parallel and engine == "divided":
        with ThreadPoolExecutor() as executor:
            return poi_attack(trace, params, "divided", executor=executor)
    return poi_attack(trace, params, engine)  # type: ignore[arg-type]


@cli.command()
def attack(
    trace_file: Annotated[str, "Trace CSV with header t,lat,lon"],
    t_min: Annotated[float, "Minimum stay duration (s)"] = DEFAULT_T_MIN,
    d_max: Annotated[float, "Maximum stay radius (m)"] = DEFAULT_D_MAX,
    s_max: Annotated[int, "Sub-trace size below which divided scans linearly"] = DEFAULT_S_MAX,
    merge_radius: Annotated[float | None, "Stay merge radius (m, default: d_max)"] = None,
    engine: Annotated[Literal["linear", "divided"], "Stay extraction engine"] = "linear",
    parallel: Annotated[bool, "Scan divided sub-traces concurrently"] = False,
    out: Annotated[str | None, "Write the POI JSON here instead of stdout"] = None,
) -> str:
    """Extract points of interest from a trace."""
    trace = csv_utils.read_trace(trace_file)
    params = AttackParams(t_min, d_max, s_max, merge_radius)
    result = _attack(trace, params, engine, parallel)
    logger.info(
        "%s: %d stays, %d POIs, %d/%d indices visited",
        engine,
        len(result.stays),
        len(result.pois),
        result.visited,
        len(trace),
    )
    return write_output(json.dumps([p.to_dict() for p in result.pois], indent=2), out)


@cli.command()
def protect(
    trace_file: Annotated[str, "Trace CSV with header t,lat,lon"],
    delta: Annotated[float, "Distance between output points (m)"] = DEFAULT_DELTA,
    out: Annotated[str | None, "Write the protected trace here instead of stdout"] = None,
) -> str:
    """Smooth a trace with Promesse."""
    trace = csv_utils.read_trace(trace_file)
    protected = promesse(trace, PromesseParams(delta))
    logger.info("Protected trace: %d -> %d points", len(trace), len(protected))
    return write_output(csv_utils.format_trace(protected), out)


@cli.command()
def audit(
    trace_file: Annotated[str, "Trace CSV with header t,lat,lon"],
    epsilon: Annotated[float, "FLAIR epsilon for the modeled trace (degrees)"] = DEFAULT_GEO_EPSILON,
    t_min: Annotated[float, "Minimum stay duration (s)"] = DEFAULT_T_MIN,
    d_max: Annotated[float, "Maximum stay radius (m)"] = DEFAULT_D_MAX,
    s_max: Annotated[int, "Sub-trace size below which divided scans linearly"] = DEFAULT_S_MAX,
    merge_radius: Annotated[float | None, "Stay merge radius (m, default: d_max)"] = None,
    delta: Annotated[float, "Promesse spacing (m)"] = DEFAULT_DELTA,
) -> str:
    """Compare POIs found on the raw, FLAIR-modeled and protected trace."""
    trace = csv_utils.read_trace(trace_file)
    params = AttackParams(t_min, d_max, s_max, merge_radius)

    raw = poi_attack(trace, params)
    store = TraceStore.from_trace(trace, epsilon)
    modeled = poi_attack(store.replay(trace.timestamps), params)
    protected = poi_attack(promesse(trace, PromesseParams(delta)), params)
    divided = poi_attack(trace, params, "divided")

    report = {
        "n_points": len(trace),
        "pois": {
            "raw": len(raw.pois),
            "divided": len(divided.pois),
            "modeled": len(modeled.pois),
            "protected": len(protected.pois),
        },
        "modeled_distances_m": poi_distances(modeled.pois, raw.pois),
        "divided_distances_m": poi_distances(divided.pois, raw.pois),
        "visited": {"linear": raw.visited, "divided": divided.visited},
        "storage": {
            "footprint_64bit": store.footprint_64bit(),
            "raw_footprint_64bit": store.raw_footprint_64bit(),
            "gain_pct": store.gain_pct(),
        },
    }
    logger.info(
        "POIs raw=%d modeled=%d protected=%d, storage gain %.2f%%",
        len(raw.pois),
        len(modeled.pois),
        len(protected.pois),
        store.gain_pct(),
    )
    return json.dumps(report, indent=2)
