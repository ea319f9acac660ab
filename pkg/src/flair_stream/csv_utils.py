"""CSV helpers: univariate "t,x" streams and "t,lat,lon" traces."""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Iterable, Sequence
from pathlib import Path

from flair_stream.errors import FlairError, ParseError
from flair_stream.flair import Sample
from flair_stream.geo import GeoPoint, GeoTrace

SAMPLE_HEADER = ["t", "x"]
TRACE_HEADER = ["t", "lat", "lon"]


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"not UTF-8: {e.reason}", line=1, source=str(path)) from None


def _rows(text: str, header: list[str], source: str) -> Iterable[tuple[int, list[float]]]:
    reader = csv.reader(io.StringIO(text))
    first = next(reader, None)
    if first is None:
        raise ParseError("empty file", line=1, source=source)
    if [h.strip() for h in first] != header:
        raise ParseError(
            f"expected header {','.join(header)!r}, got {','.join(first)!r}",
            line=1,
            source=source,
        )
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(
                f"expected {len(header)} columns, got {len(row)}",
                line=reader.line_num,
                source=source,
            )
        values: list[float] = []
        for col, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(
                    f"invalid number {cell.strip()!r} in column {header[col]!r}",
                    line=reader.line_num,
                    source=source,
                ) from None
            if not math.isfinite(value):
                raise ParseError(
                    f"non-finite value in column {header[col]!r}",
                    line=reader.line_num,
                    source=source,
                )
            values.append(value)
        yield reader.line_num, values


def parse_samples(text: str, source: str = "<input>") -> list[Sample]:
    samples: list[Sample] = []
    for line, (t, x) in _rows(text, SAMPLE_HEADER, source):
        if samples and t <= samples[-1].t:
            raise ParseError("timestamps not strictly increasing", line=line, source=source)
        samples.append(Sample(t, x))
    return samples


def parse_trace(text: str, source: str = "<input>") -> GeoTrace:
    points: list[GeoPoint] = []
    for line, (t, lat, lon) in _rows(text, TRACE_HEADER, source):
        if points and t <= points[-1].t:
            raise ParseError("timestamps not strictly increasing", line=line, source=source)
        try:
            point = GeoPoint(t, lat, lon)
        except FlairError as e:
            raise ParseError(str(e), line=line, source=source) from None
        if points and abs(point.lon - points[-1].lon) > 180.0:
            raise ParseError("trace crosses the antimeridian", line=line, source=source)
        points.append(point)
    return GeoTrace(points)


def read_samples(path: str | Path) -> list[Sample]:
    return parse_samples(read_text(path), source=str(path))


def read_trace(path: str | Path) -> GeoTrace:
    return parse_trace(read_text(path), source=str(path))


def format_rows(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def format_samples(samples: Iterable[Sample]) -> str:
    return format_rows(SAMPLE_HEADER, ((s.t, s.x) for s in samples))


def format_trace(trace: Iterable[GeoPoint]) -> str:
    return format_rows(TRACE_HEADER, ((p.t, p.lat, p.lon) for p in trace))
