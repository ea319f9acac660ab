"""Cli instance and command registration."""

from __future__ import annotations

import argparse
import inspect
import sys
import types
import typing
from collections.abc import Callable
from pathlib import Path
from typing import Annotated, Literal, get_args, get_origin

from flair_stream.errors import FlairError


def _unwrap(hint: object) -> tuple[object, str | None]:
    """Split Annotated[T, "help"] and drop a None member from T | None."""
    help_text = None
    # Python < 3.11: get_type_hints wraps None-defaulted params in Optional[...].
    if get_origin(hint) is typing.Union:
        members = [a for a in get_args(hint) if a is not type(None)]
        if len(members) == 1 and get_origin(members[0]) is Annotated:
            hint = members[0]
    if get_origin(hint) is Annotated:
        hint, *meta = get_args(hint)
        help_text = next((m for m in meta if isinstance(m, str)), None)
    if get_origin(hint) in (typing.Union, types.UnionType):
        members = [a for a in get_args(hint) if a is not type(None)]
        if len(members) == 1:
            hint = members[0]
    return hint, help_text


class Cli:
    """Registry of subcommands; each function's signature defines its flags.

    A parameter without a default is positional, one with a default becomes
    ``--flag``, a ``bool`` becomes a switch and a ``Literal`` restricts the
    choices. The function returns the text to print on stdout.
    """

    def __init__(self, name: str, description: str | None = None) -> None:
        self.name = name
        self.description = description
        self.commands: dict[str, Callable[..., str]] = {}

    def command(self, name: str | None = None) -> Callable[[Callable[..., str]], Callable[..., str]]:
        def register(fn: Callable[..., str]) -> Callable[..., str]:
            self.commands[name or fn.__name__.removeprefix("cmd_").replace("_", "-")] = fn
            return fn

        return register

    def parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog=self.name, description=self.description)
        sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
        for cmd_name, fn in self.commands.items():
            doc = inspect.getdoc(fn) or ""
            cmd = sub.add_parser(cmd_name, help=doc.splitlines()[0] if doc else None, description=doc)
            hints = typing.get_type_hints(fn, include_extras=True)
            for param in inspect.signature(fn).parameters.values():
                kind, help_text = _unwrap(hints.get(param.name, str))
                options: dict = {"help": help_text}
                if get_origin(kind) is Literal:
                    options["choices"] = list(get_args(kind))
                    kind = type(options["choices"][0])
                if param.default is inspect.Parameter.empty:
                    cmd.add_argument(param.name, type=kind, **options)
                    continue
                flag = "--" + param.name.replace("_", "-")
                if kind is bool:
                    cmd.add_argument(flag, dest=param.name, action="store_true", **options)
                else:
                    cmd.add_argument(
                        flag, dest=param.name, type=kind, default=param.default, **options
                    )
        return parser

    def run(self, argv: list[str] | None = None) -> int:
        try:
            args = vars(self.parser().parse_args(argv))
        except SystemExit as e:
            return e.code if isinstance(e.code, int) else 2
        fn = self.commands[args.pop("command")]
        try:
            output = fn(**args)
        except FlairError as e:
            print(f"Error: {e}", file=sys.stderr)
            return e.exit_code
        except OSError as e:
            print(f"Error: {e}", file=sys.stderr)
            return 1
        if output:
            sys.stdout.write(output if output.endswith("\n") else output + "\n")
        return 0


def write_output(text: str, out: str | None) -> str:
    """Write text to ``out`` and return nothing, or hand it back for stdout."""
    if out is None:
        return text
    Path(out).write_text(text, encoding="utf-8")
    return ""


cli = Cli(
    "flair-stream",
    description="Error-bounded stream storage, POI attacks and Promesse.",
)

# Import command modules to trigger @cli.command registration
from flair_stream.commands import (  # noqa: E402, F401
    bench_ops,
    stream_ops,
    trace_ops,
)
