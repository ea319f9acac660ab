"""Error hierarchy: domain errors exit 1, parse errors exit 2."""

from __future__ import annotations


class FlairError(Exception):
    exit_code = 1


class DomainError(FlairError):
    """An input that is well-formed but violates an operation's contract."""


class InvalidEpsilon(DomainError, ValueError):
    pass


class InvalidParameter(DomainError, ValueError):
    pass


class NonMonotonicTimestamp(DomainError, ValueError):
    pass


class NonFiniteSample(DomainError, ValueError):
    pass


class EmptyModel(DomainError):
    pass


class TimestampBeforeHistory(DomainError, ValueError):
    pass


class TooFewSamples(DomainError, ValueError):
    pass


class InvalidCoordinate(DomainError, ValueError):
    pass


class EmptyWindow(DomainError, ValueError):
    pass


class IndexOutOfRange(DomainError, IndexError):
    pass


class TraceTooShort(DomainError, ValueError):
    pass


class DegeneratePath(DomainError, ValueError):
    pass


class UnknownStore(DomainError, ValueError):
    pass


class ParseError(FlairError):
    """Malformed input file, located by 1-based line and optional offset."""

    exit_code = 2

    def __init__(
        self,
        message: str,
        *,
        line: int,
        offset: int | None = None,
        source: str = "<input>",
    ) -> None:
        self.message = message
        self.line = line
        self.offset = offset
        self.source = source
        where = f"{source}:{line}" if offset is None else f"{source}:{line}:{offset}"
        super().__init__(f"{where}: {message}")
