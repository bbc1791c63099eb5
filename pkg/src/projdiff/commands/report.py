"""``report acceptance``: the acceptance table."""

import argparse
from typing import Any

from ..dependencies import Services
from ..services.acceptance_service import DEFAULT_SEEDS, AcceptanceService
from .common import CommandResult, add_command


def cmd_report(args: argparse.Namespace, services: Services) -> CommandResult:
    """Run the selected acceptance rows."""
    rows = [r.strip() for r in args.rows.split(",") if r.strip()] if args.rows else None
    report = AcceptanceService(services.config, seeds=args.seeds).run(rows)
    return CommandResult(report, ok=report.failed == 0)


def register(subparsers: Any) -> None:
    parser = add_command(subparsers, "report", cmd_report, "cli", "cmd_report", "Reproduce reference tables")
    parser.add_argument("table", choices=["acceptance"], help="Table to reproduce")
    parser.add_argument("--rows", help="Comma separated row ids (all rows if omitted)")
    parser.add_argument("--seeds", type=int, default=DEFAULT_SEEDS, help="Consecutive seeds every row must pass at")
