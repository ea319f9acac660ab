"""Stream operations: model, read, tune."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Annotated

from flair_stream import csv_utils
from flair_stream.bench import summarize_model
from flair_stream.cli import cli, write_output
from flair_stream.flair import FlairModel, Sample, deserialize, model_timestamps, serialize
from flair_stream.settings import DEFAULT_EPSILON
from flair_stream.tuning import drifts, epsilon_candidates

logger = logging.getLogger(__name__)


@cli.command()
def model(
    csv_file: Annotated[str, "Univariate CSV with header t,x"],
    epsilon: Annotated[float, "Maximum absolute read-back error"] = DEFAULT_EPSILON,
    out: Annotated[
        str | None, "Model file to write; stdout then gets the JSON summary"
    ] = None,
    timestamps: Annotated[bool, "Model the t column as couples (i, t_i)"] = False,
) -> str:
    """Build a FLAIR model of a CSV stream and report its gain and error."""
    samples = csv_utils.read_samples(csv_file)
    if timestamps:
        flair = model_timestamps((s.t for s in samples), epsilon)
        samples = [Sample(float(i), s.t) for i, s in enumerate(samples)]
    else:
        flair = FlairModel(epsilon)
        flair.extend(samples)

    summary = summarize_model(flair, samples)
    logger.info(
        "n=%d |H|=%d floats=%d gain=%.2f%% mae=%.3g max_error=%.3g",
        summary["n"],
        summary["history"],
        summary["floats"],
        summary["gain_pct"],
        summary["mae"],
        summary["max_error"],
    )
    if out is None:
        return serialize(flair).decode("utf-8")
    Path(out).write_bytes(serialize(flair))
    return json.dumps(summary)


@cli.command()
def read(
    model_file: Annotated[str, "Model file written by 'model'"],
    t: Annotated[float, "Timestamp to read"],
) -> str:
    """Approximate value of a modeled stream at time t."""
    data = Path(model_file).read_bytes()
    flair = deserialize(data, source=model_file)
    return repr(flair.read(t))


@cli.command()
def tune(
    csv_file: Annotated[str, "Univariate CSV with header t,x"],
    out: Annotated[str | None, "Write the drift CDF as CSV (drift,cdf)"] = None,
) -> str:
    """Candidate epsilons covering 90%, 95% and 99% of the drifts."""
    cdf = drifts(csv_utils.read_samples(csv_file))
    c90, c95, c99 = epsilon_candidates(cdf)
    if out is not None:
        write_output(csv_utils.format_rows(["drift", "cdf"], cdf.rows()), out)
    return json.dumps({"p90": c90, "p95": c95, "p99": c99})
