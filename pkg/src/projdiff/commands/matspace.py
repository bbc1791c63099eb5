"""Matrix space commands: ``matspace`` and ``bounds``."""

import argparse
from typing import Any

from ..dependencies import Services
from ..exceptions import InputValidationException
from ..services.matspace_service import MatspaceService
from .common import CommandResult, add_command


def cmd_matspace(args: argparse.Namespace, services: Services) -> CommandResult:
    """Certify, inspect or match a matrix space, or run the odd-rank search."""
    matspaces = services.matspaces
    if args.odd_rank:
        m, r = args.odd_rank
        report = matspaces.odd_rank_obstruction(m, r, args.trials)
        return CommandResult(report, ok=r % 2 == 0 or not report.constant_rank_found)
    if not args.space:
        raise InputValidationException("a matrix space is required", field="space")
    space = matspaces.parse_space(args.space)
    if args.match:
        return CommandResult(matspaces.match_signed_permutation(space, matspaces.parse_space(args.match)))
    if args.doubling:
        return CommandResult(matspaces.detect_doubling(space))
    rank = args.certify if args.certify is not None else matspaces.generic_rank(space)
    certificate = matspaces.certify_constant_rank(space, rank, args.mode)
    return CommandResult(certificate, ok=certificate.certified)


def cmd_bounds(args: argparse.Namespace, services: Services) -> CommandResult:
    """Dimension bounds for spaces of constant rank."""
    return CommandResult(MatspaceService.rank_bounds(args.r, args.m, args.n))


def register(subparsers: Any) -> None:
    parser = add_command(
        subparsers, "matspace", cmd_matspace, "matspaces", "certify_constant_rank", "Constant-rank matrix spaces"
    )
    parser.add_argument(
        "space", nargs="?", help="Exemplar (B_I, C_II, A_I, ...) or doubled:/split:/graded: constructor"
    )
    parser.add_argument("--certify", type=int, metavar="R", help="Claimed constant rank (observed rank if omitted)")
    parser.add_argument("--mode", choices=["randomized", "symbolic"], default="randomized")
    parser.add_argument("--doubling", action="store_true", help="Detect the doubled block structure")
    parser.add_argument("--match", metavar="SPACE", help="Search a signed permutation onto another space")
    parser.add_argument(
        "--odd-rank",
        nargs=2,
        type=int,
        metavar=("M", "R"),
        help="Search symmetric pencils of rank R in size M for rank drops",
    )
    parser.add_argument("--trials", type=int, help="Pencils tried by --odd-rank")

    parser = add_command(subparsers, "bounds", cmd_bounds, "matspaces", "rank_bounds", "Constant-rank bound table")
    parser.add_argument("r", type=int, help="Rank")
    parser.add_argument("m", type=int, help="Rows")
    parser.add_argument("n", type=int, help="Columns")
