"""Acceptance table reports."""

from typing import Any

from pydantic import Field

from .common import ReportModel


class AcceptanceRow(ReportModel):
    """One reproduced table entry."""

    id: str
    title: str
    passed: bool
    duration: float = Field(description="Wall time in seconds")
    detail: dict[str, Any] = Field(default_factory=dict)


class AcceptanceReport(ReportModel):
    rows: list[AcceptanceRow]
    passed: int
    failed: int
    seed: int
