"""Variety commands: ``info`` and ``ff``."""

import argparse
from typing import Any

from ..dependencies import Services
from ..schemas.jet_schemas import FundamentalFormReport
from .common import CommandResult, add_command, parse_vector


def cmd_info(args: argparse.Namespace, services: Services) -> CommandResult:
    """Dimension, ambient space and Jacobian rank of a variety."""
    variety = services.catalog.parse_spec(args.variety)
    info = services.catalog.info(variety)
    return CommandResult(info, ok=info.jacobian_rank == info.n)


def cmd_ff(args: argparse.Namespace, services: Services) -> CommandResult:
    """Osculating filtration and fundamental forms at a point."""
    variety = services.catalog.parse_spec(args.variety)
    point = parse_vector(args.point, "point") if args.point else None
    if args.refined:
        return CommandResult(services.jets.refined_report(variety, point))
    report: FundamentalFormReport = services.jets.report(variety, point, order=args.order)
    ok = report.prolongation is None or report.prolongation.contained
    return CommandResult(report, ok=ok)


def register(subparsers: Any) -> None:
    parser = add_command(subparsers, "info", cmd_info, "catalog", "info", "Summarize a variety")
    parser.add_argument("variety", help="Variety spec, e.g. segre:2,2")

    parser = add_command(subparsers, "ff", cmd_ff, "jets", "jet_tower", "Fundamental forms at a point")
    parser.add_argument("variety", help="Variety spec")
    parser.add_argument("--order", "-k", type=int, default=3, help="Jet order K")
    parser.add_argument("--point", help="Source point, comma separated rationals")
    parser.add_argument(
        "--refined", action="store_true", help="Report Ann(v), ker II_v, SA(v) and III^v at an II-generic v"
    )
