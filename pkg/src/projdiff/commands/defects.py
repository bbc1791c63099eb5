"""Defect commands: ``defects`` and ``dual``."""

import argparse
from typing import Any

from ..dependencies import Services
from ..schemas.defect_schemas import JoinReport
from .common import CommandResult, add_command


def cmd_defects(args: argparse.Namespace, services: Services) -> CommandResult:
    """Secant, tangential, dual and Gauss data with the classical checks."""
    variety = services.catalog.parse_spec(args.variety)
    if args.join:
        other = services.catalog.parse_spec(args.join)
        dim = services.defects.join_dim(variety, other)
        return CommandResult(JoinReport(first=variety.name, second=other.name, dim=dim, seed=services.config.seed))
    report = services.defects.report(variety, k=args.secant)
    return CommandResult(report, ok=not report.checks.failed)


def cmd_dual(args: argparse.Namespace, services: Services) -> CommandResult:
    """Dual variety dimension, or its second fundamental form with a rank census."""
    variety = services.catalog.parse_spec(args.variety)
    if args.second_ff:
        return CommandResult(services.defects.dual_second_ff_report(variety, samples=args.samples))
    return CommandResult(services.defects.dual_dim(variety))


def register(subparsers: Any) -> None:
    parser = add_command(subparsers, "defects", cmd_defects, "defects", "report", "Defects of a variety")
    parser.add_argument("variety", help="Variety spec")
    parser.add_argument("--secant", type=int, default=2, help="Secant order k")
    parser.add_argument("--join", help="Second variety spec; report the join dimension instead")

    parser = add_command(subparsers, "dual", cmd_dual, "defects", "dual_dim", "Dual variety")
    parser.add_argument("variety", help="Variety spec")
    parser.add_argument("--second-ff", action="store_true", help="Second fundamental form of the dual variety")
    parser.add_argument("--samples", type=int, default=100, help="Random combinations in the rank census")
