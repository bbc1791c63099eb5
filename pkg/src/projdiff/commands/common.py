"""Shared helpers for command handlers.

Handlers receive parsed arguments and the service container and return a
``CommandResult``. Reports are written to stdout as JSON or as a flat
key/value table.
"""

import argparse
import json
import sys
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from pydantic import BaseModel

from ..dependencies import Services
from ..exact.linalg import Vector, to_rat
from ..exceptions import InputValidationException


@dataclass(frozen=True)
class CommandResult:
    """Report of one command and whether its requested checks passed."""

    report: BaseModel
    ok: bool = True


Handler = Callable[[argparse.Namespace, Services], CommandResult]


def global_options(defaults: bool) -> argparse.ArgumentParser:
    """Flags accepted before and after the sub-command name.

    With ``defaults=False`` absent flags leave the namespace untouched, so a
    value given before the sub-command survives sub-parsing.
    """
    missing: Any = None if defaults else argparse.SUPPRESS
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--seed", type=int, default=missing, help="Seed of the random stream")
    parser.add_argument("--retries", type=int, default=missing, help="Re-draws of random points")
    parser.add_argument("--height", type=int, default=missing, help="Height of random rationals")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output_format", action="store_const", const="json", default=missing)
    fmt.add_argument("--table", dest="output_format", action="store_const", const="table", default=missing)
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default=missing,
        help="Logging level on stderr",
    )
    return parser


def add_command(
    subparsers: Any,
    name: str,
    handler: Handler,
    module: str,
    op: str,
    help_text: str,
) -> argparse.ArgumentParser:
    """Register a sub-command carrying the global flags."""
    parser = subparsers.add_parser(name, help=help_text, parents=[global_options(defaults=False)])
    parser.set_defaults(handler=handler, module=module, op=op)
    return parser


def parse_vector(text: str, field: str = "vector") -> Vector:
    """``"1,0,-1/2"`` as an exact rational vector."""
    try:
        return tuple(to_rat(part.strip()) for part in text.split(",") if part.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InputValidationException(f"malformed rational vector '{text}'", field=field, value=text) from e


def parse_vectors(text: str, field: str = "vectors") -> list[Vector]:
    """``"1,0,0;0,1,0"`` as a list of vectors."""
    return [parse_vector(part, field) for part in text.split(";") if part.strip()]


def _flatten(prefix: str, value: Any, out: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for key, inner in value.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), inner, out)
    elif isinstance(value, list) and value and isinstance(value[0], dict):
        for i, inner in enumerate(value):
            _flatten(f"{prefix}[{i}]", inner, out)
    else:
        out.append((prefix, json.dumps(value) if isinstance(value, list) else str(value)))


def render(report: BaseModel, output_format: str) -> str:
    """Serialize a report for stdout."""
    data = report.model_dump(mode="json")
    if output_format == "json":
        return json.dumps(data, indent=2) + "\n"
    rows: list[tuple[str, str]] = []
    _flatten("", data, rows)
    width = max((len(key) for key, _ in rows), default=0)
    return "".join(f"{key.ljust(width)}  {value}\n" for key, value in rows)


def write(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()
