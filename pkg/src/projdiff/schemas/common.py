"""Shared report helpers.

Exact rationals are serialized as strings (``"3"``, ``"-5/7"``) so reports
never round.
"""

from collections.abc import Iterable, Sequence
from typing import Any

from pydantic import BaseModel, ConfigDict, Field


def fmt_rat(value: Any) -> str:
    """``"p"`` or ``"p/q"`` for an exact rational."""
    num = int(value.numerator)
    den = int(value.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def fmt_vector(values: Iterable[Any]) -> list[str]:
    return [fmt_rat(v) for v in values]


def fmt_matrix(rows: Sequence[Sequence[Any]]) -> list[list[str]]:
    return [fmt_vector(row) for row in rows]


class ReportModel(BaseModel):
    """Frozen base for every report written to stdout."""

    model_config = ConfigDict(frozen=True)


class ErrorDetail(ReportModel):
    """Body of the machine-readable error document."""

    code: str = Field(description="Machine-readable error code")
    message: str = Field(description="Human-readable error message")
    exit_code: int = Field(description="Process exit code")
    module: str | None = Field(default=None, description="Laboratory module")
    op: str | None = Field(default=None, description="Failing operation")
    details: dict[str, Any] = Field(default_factory=dict)


class ErrorResponse(ReportModel):
    """``{"error": {...}}`` document."""

    error: ErrorDetail
