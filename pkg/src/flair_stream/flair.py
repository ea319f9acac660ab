"""FLAIR: online epsilon-bounded piecewise-linear model of a univariate stream.

The model keeps a history of persisted breakpoints plus the state of the
current segment: its slope, the allowed cone of slopes (slope_min,
slope_max) that keeps every covered sample within epsilon, and the last
inserted sample. Raw samples are never retained.
"""

from __future__ import annotations

import bisect
import math
from collections.abc import Iterable
from dataclasses import dataclass

from flair_stream.errors import (
    EmptyModel,
    InvalidEpsilon,
    NonFiniteSample,
    NonMonotonicTimestamp,
    ParseError,
    TimestampBeforeHistory,
)


@dataclass(frozen=True, slots=True)
class Sample:
    t: float
    x: float


def check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not math.isfinite(epsilon) or epsilon <= 0:
        raise InvalidEpsilon(f"epsilon must be a finite value > 0, got {epsilon!r}")
    return epsilon


def _slopes(t0: float, x0: float, t: float, x: float, eps: float) -> tuple[float, float, float]:
    """Gradient from (t0, x0) to (t, x) and its epsilon cone; all must be finite."""
    t_delta = t - t0
    x_delta = x - x0
    slopes = (x_delta / t_delta, (x_delta - eps) / t_delta, (x_delta + eps) / t_delta)
    if not all(math.isfinite(s) for s in slopes):
        raise NonFiniteSample(f"slope from ({t0!r}, {x0!r}) to ({t!r}, {x!r}) overflows")
    return slopes


class FlairModel:
    """History H plus (slope_current, slope_min, slope_max, last).

    Unbounded cone sides are held as -inf/+inf; they only occur between the
    first and second insert.
    """

    __slots__ = (
        "epsilon",
        "slope_current",
        "slope_min",
        "slope_max",
        "count_inserted",
        "_ts",
        "_xs",
        "_last_t",
        "_last_x",
    )

    def __init__(self, epsilon: float) -> None:
        self.epsilon = check_epsilon(epsilon)
        self.slope_current = 0.0
        self.slope_min = -math.inf
        self.slope_max = math.inf
        self.count_inserted = 0
        self._ts: list[float] = []
        self._xs: list[float] = []
        self._last_t: float | None = None
        self._last_x = 0.0

    # ------------------------------------------------------------------
    # State
    # ------------------------------------------------------------------

    @property
    def history(self) -> tuple[Sample, ...]:
        return tuple(Sample(t, x) for t, x in zip(self._ts, self._xs))

    @property
    def history_size(self) -> int:
        return len(self._ts)

    @property
    def last(self) -> Sample | None:
        if self._last_t is None:
            return None
        return Sample(self._last_t, self._last_x)

    def footprint_64bit(self) -> int:
        """Two values per history point, plus aM, amin, amax and the last pair."""
        return 2 * len(self._ts) + 5

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FlairModel):
            return NotImplemented
        return (
            self._ts == other._ts
            and self._xs == other._xs
            and self.slope_current == other.slope_current
            and self.slope_min == other.slope_min
            and self.slope_max == other.slope_max
            and self.last == other.last
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"FlairModel(epsilon={self.epsilon!r}, |H|={len(self._ts)}, "
            f"slope={self.slope_current!r}, cone=({self.slope_min!r}, {self.slope_max!r}), "
            f"last={self.last!r})"
        )

    # ------------------------------------------------------------------
    # Insert
    # ------------------------------------------------------------------

    def insert(self, t: float, x: float) -> bool:
        """Insert one sample; return True when a breakpoint was persisted."""
        if not (math.isfinite(t) and math.isfinite(x)):
            raise NonFiniteSample(f"sample ({t!r}, {x!r}) is not finite")
        last_t = self._last_t
        if last_t is None:
            self._ts.append(t)
            self._xs.append(x)
            self._last_t = t
            self._last_x = x
            self.count_inserted = 1
            return False
        if t <= last_t:
            raise NonMonotonicTimestamp(
                f"timestamp {t!r} is not after the last inserted timestamp {last_t!r}"
            )

        eps = self.epsilon
        gradient, low, high = _slopes(self._ts[-1], self._xs[-1], t, x, eps)
        broke = not (self.slope_min < gradient < self.slope_max)
        if broke:
            # Only reachable once a segment spans two samples, so last_t > H[-1].t.
            if last_t == self._ts[-1]:
                raise NonFiniteSample(f"slope to ({t!r}, {x!r}) overflows")
            gradient, low, high = _slopes(last_t, self._last_x, t, x, eps)
            self._ts.append(last_t)
            self._xs.append(self._last_x)
            self.slope_current = gradient
            self.slope_min = low
            self.slope_max = high
        else:
            self.slope_current = gradient
            if low > self.slope_min:
                self.slope_min = low
            if high < self.slope_max:
                self.slope_max = high

        self._last_t = t
        self._last_x = x
        self.count_inserted += 1
        return broke

    def insert_sample(self, sample: Sample) -> bool:
        return self.insert(sample.t, sample.x)

    def extend(self, samples: Iterable[Sample]) -> None:
        for sample in samples:
            self.insert(sample.t, sample.x)

    # ------------------------------------------------------------------
    # Read
    # ------------------------------------------------------------------

    def read(self, t: float) -> float:
        ts = self._ts
        if not ts:
            raise EmptyModel("cannot read from an empty model")
        if t < ts[0]:
            raise TimestampBeforeHistory(
                f"timestamp {t!r} precedes the first modeled timestamp {ts[0]!r}"
            )
        t_m = ts[-1]
        if t >= t_m:
            return self.slope_current * (t - t_m) + self._xs[-1]
        # Half-open segments: H[k].t <= t < H[k+1].t
        k = bisect.bisect_right(ts, t) - 1
        xs = self._xs
        gradient = (xs[k + 1] - xs[k]) / (ts[k + 1] - ts[k])
        return gradient * (t - ts[k]) + xs[k]

    # ------------------------------------------------------------------
    # Restore
    # ------------------------------------------------------------------

    @classmethod
    def restore(
        cls,
        epsilon: float,
        history: Iterable[Sample],
        slope_current: float,
        slope_min: float,
        slope_max: float,
        last: Sample | None,
        count_inserted: int | None = None,
    ) -> FlairModel:
        model = cls(epsilon)
        for sample in history:
            model._ts.append(sample.t)
            model._xs.append(sample.x)
        model.slope_current = slope_current
        model.slope_min = slope_min
        model.slope_max = slope_max
        if last is not None:
            model._last_t = last.t
            model._last_x = last.x
        if count_inserted is None:
            count_inserted = len(model._ts) + (
                1 if last is not None and model._ts and last.t > model._ts[-1] else 0
            )
        model.count_inserted = count_inserted
        return model


def new_model(epsilon: float) -> FlairModel:
    return FlairModel(epsilon)


def model_timestamps(timestamps: Iterable[float], epsilon: float) -> FlairModel:
    """Model irregular timestamps as couples (i, t_i)."""
    model = FlairModel(epsilon)
    for i, t in enumerate(timestamps):
        model.insert(float(i), float(t))
    return model


# ---------------------------------------------------------------------------
# Model file format
# ---------------------------------------------------------------------------

HEADER_PREFIX = "# flair"
TRAILER_PREFIX = "##"


def _format_float(value: float) -> str:
    if value == math.inf:
        return "inf"
    if value == -math.inf:
        return "-inf"
    return repr(value)


def _parse_float(token: str, *, line: int, source: str, allow: str = "") -> float:
    if token in ("inf", "-inf"):
        if token not in allow.split():
            raise ParseError(f"unbounded token {token!r} not allowed here", line=line, source=source)
        return math.inf if token == "inf" else -math.inf
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"invalid number {token!r}", line=line, source=source) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite number {token!r}", line=line, source=source)
    return value


def serialize(model: FlairModel) -> bytes:
    """Header, one "t x" record per history point, then the trailer.

    The trailer is "## aM amin amax t_last x_last" and is omitted for an
    empty model.
    """
    lines = [
        f"{HEADER_PREFIX} epsilon={_format_float(model.epsilon)} inserted={model.count_inserted}"
    ]
    for t, x in zip(model._ts, model._xs):
        lines.append(f"{_format_float(t)} {_format_float(x)}")
    last = model.last
    if last is not None:
        lines.append(
            " ".join(
                [
                    TRAILER_PREFIX,
                    _format_float(model.slope_current),
                    _format_float(model.slope_min),
                    _format_float(model.slope_max),
                    _format_float(last.t),
                    _format_float(last.x),
                ]
            )
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


def deserialize(
    data: bytes, epsilon: float | None = None, *, source: str = "<model>"
) -> FlairModel:
    """Parse a model file; epsilon defaults to the one recorded in the header."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        line_start = data.rfind(b"\n", 0, e.start) + 1
        raise ParseError(
            f"not UTF-8: {e.reason}",
            line=data.count(b"\n", 0, e.start) + 1,
            offset=e.start - line_start,
            source=source,
        ) from None
    if not text:
        raise ParseError("empty model file", line=1, source=source)
    if not text.endswith("\n"):
        raise ParseError(
            "truncated model file (missing final newline)",
            line=text.count("\n") + 1,
            source=source,
        )
    rows = text[:-1].split("\n")

    header = rows[0].split()
    if " ".join(header[:2]) != HEADER_PREFIX:
        raise ParseError("missing '# flair' header", line=1, offset=0, source=source)
    fields: dict[str, str] = {}
    for item in header[2:]:
        key, sep, value = item.partition("=")
        if not sep:
            raise ParseError(f"malformed header field {item!r}", line=1, source=source)
        fields[key] = value
    if epsilon is None:
        if "epsilon" not in fields:
            raise ParseError("header does not record epsilon", line=1, source=source)
        epsilon = _parse_float(fields["epsilon"], line=1, source=source)
    try:
        epsilon = check_epsilon(epsilon)
    except InvalidEpsilon as e:
        raise ParseError(str(e), line=1, source=source) from None
    count_inserted: int | None = None
    if "inserted" in fields:
        try:
            count_inserted = int(fields["inserted"])
        except ValueError:
            raise ParseError("malformed inserted count", line=1, source=source) from None

    history: list[Sample] = []
    trailer: list[str] | None = None
    for lineno, row in enumerate(rows[1:], start=2):
        tokens = row.split()
        if trailer is not None:
            raise ParseError("record after trailer", line=lineno, source=source)
        if tokens and tokens[0] == TRAILER_PREFIX:
            trailer = tokens[1:]
            trailer_line = lineno
            continue
        if len(tokens) != 2:
            raise ParseError(
                f"expected 't x' record, got {len(tokens)} tokens", line=lineno, source=source
            )
        t = _parse_float(tokens[0], line=lineno, source=source)
        x = _parse_float(tokens[1], line=lineno, source=source)
        if history and t <= history[-1].t:
            raise ParseError("history timestamps not strictly increasing", line=lineno, source=source)
        history.append(Sample(t, x))

    if trailer is None:
        if history:
            raise ParseError(
                "truncated model file (missing trailer)", line=len(rows) + 1, source=source
            )
        return FlairModel.restore(epsilon, [], 0.0, -math.inf, math.inf, None, 0)

    if len(trailer) != 5:
        raise ParseError(
            f"trailer needs 5 values, got {len(trailer)}", line=trailer_line, source=source
        )
    if not history:
        raise ParseError("trailer without history", line=trailer_line, source=source)
    slope_current = _parse_float(trailer[0], line=trailer_line, source=source)
    slope_min = _parse_float(trailer[1], line=trailer_line, source=source, allow="-inf")
    slope_max = _parse_float(trailer[2], line=trailer_line, source=source, allow="inf")
    last = Sample(
        _parse_float(trailer[3], line=trailer_line, source=source),
        _parse_float(trailer[4], line=trailer_line, source=source),
    )
    if last.t < history[-1].t:
        raise ParseError("last sample precedes history", line=trailer_line, source=source)
    return FlairModel.restore(
        epsilon, history, slope_current, slope_min, slope_max, last, count_inserted
    )
