"""Osculation commands: ``osc``, ``monge``, ``syzygies``, ``line`` and ``maxrank``."""

import argparse
from typing import Any

from ..dependencies import Services
from .common import CommandResult, add_command, parse_vector, parse_vectors


def _point(args: argparse.Namespace) -> Any:
    return parse_vector(args.point, "point") if args.point else None


def cmd_osc(args: argparse.Namespace, services: Services) -> CommandResult:
    """Degree-d forms osculating to order p."""
    variety = services.catalog.parse_spec(args.variety)
    report = services.osc.osculating_space(variety, args.d, args.p, _point(args))
    return CommandResult(report, ok=report.formula_dim is None or report.formula_dim == report.affine_dim)


def cmd_monge(args: argparse.Namespace, services: Services) -> CommandResult:
    """Generalized Monge system for quadrics."""
    variety = services.catalog.parse_spec(args.variety)
    return CommandResult(services.osc.monge_check(variety, _point(args)))


def cmd_syzygies(args: argparse.Namespace, services: Services) -> CommandResult:
    """Linear syzygies of the second fundamental form."""
    variety = services.catalog.parse_spec(args.variety)
    report = services.osc.linear_syzygies(services.jets.second_ff(variety, _point(args)))
    return CommandResult(report, ok=report.rank_bound_holds is not False)


def cmd_line(args: argparse.Namespace, services: Services) -> CommandResult:
    """Osculation order and containment of the line in a tangent direction."""
    variety = services.catalog.parse_spec(args.variety)
    report = services.osc.line_report(variety, parse_vector(args.dir, "direction"), args.maxk, _point(args))
    return CommandResult(report, ok=report.contained != "true" or report.osculation_order == report.maxk)


def cmd_maxrank(args: argparse.Namespace, services: Services) -> CommandResult:
    """Maximal-rank conditions of a candidate tangent plane."""
    variety = services.catalog.parse_spec(args.variety)
    plane = parse_vectors(args.plane, "plane")
    return CommandResult(services.osc.maximal_rank_report(variety, plane, args.m, _point(args)))


def register(subparsers: Any) -> None:
    parser = add_command(subparsers, "osc", cmd_osc, "osc", "osculating_space", "Osculating hypersurfaces")
    parser.add_argument("variety", help="Variety spec")
    parser.add_argument("-d", type=int, required=True, help="Degree of the forms")
    parser.add_argument("-p", type=int, required=True, help="Osculation order")
    parser.add_argument("--point", help="Source point")

    parser = add_command(subparsers, "monge", cmd_monge, "osc", "monge_check", "Monge system for quadrics")
    parser.add_argument("variety", help="Variety spec")
    parser.add_argument("--point", help="Source point")

    parser = add_command(subparsers, "syzygies", cmd_syzygies, "osc", "linear_syzygies", "Linear syzygies of |II|")
    parser.add_argument("variety", help="Variety spec")
    parser.add_argument("--point", help="Source point")

    parser = add_command(subparsers, "line", cmd_line, "osc", "line_osculation_order", "Line osculation")
    parser.add_argument("variety", help="Variety spec")
    parser.add_argument("--dir", required=True, help="Tangent direction, comma separated rationals")
    parser.add_argument("--maxk", type=int, default=4, help="Largest order checked")
    parser.add_argument("--point", help="Source point")

    parser = add_command(subparsers, "maxrank", cmd_maxrank, "osc", "maximal_rank_report", "Maximal-rank conditions")
    parser.add_argument("variety", help="Variety spec")
    parser.add_argument("--plane", required=True, help="Spanning vectors separated by ';'")
    parser.add_argument("-m", type=int, required=True, help="Order m")
    parser.add_argument("--point", help="Source point")
