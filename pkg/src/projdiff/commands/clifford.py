"""Clifford commands: ``clifford`` and ``clifford-module``."""

import argparse
from typing import Any

from ..dependencies import Services
from ..schemas.clifford_schemas import CliffordModuleReport
from .common import CommandResult, add_command


def cmd_clifford(args: argparse.Namespace, services: Services) -> CommandResult:
    """Relation suite of ``Cl(V, Q)`` for ``dim V = m``."""
    report = services.clifford.check(args.m, args.form, trials=args.trials, rho_trials=args.rho_trials)
    return CommandResult(report, ok=report.passed)


def cmd_clifford_module(args: argparse.Namespace, services: Services) -> CommandResult:
    """Clifford module induced by ``|II|`` at random general points."""
    variety = services.catalog.parse_spec(args.variety)
    modules = services.clifford.module_for_variety(variety, points=args.points)
    report = CliffordModuleReport(variety=variety.name, modules=modules, seed=services.config.seed)
    return CommandResult(report, ok=report.verified)


def register(subparsers: Any) -> None:
    parser = add_command(subparsers, "clifford", cmd_clifford, "clifford", "clifford_mul", "Clifford relation suite")
    parser.add_argument("-m", type=int, required=True, help="Dimension of V")
    parser.add_argument("--form", choices=["hyperbolic", "diagonal"], default="hyperbolic")
    parser.add_argument("--trials", type=int, default=100, help="Random associativity trials")
    parser.add_argument("--rho-trials", type=int, default=50, help="Random even products checked under rho")

    parser = add_command(
        subparsers,
        "clifford-module",
        cmd_clifford_module,
        "clifford",
        "clifford_module_from_II",
        "Clifford module of a variety with critical tangential defect",
    )
    parser.add_argument("variety", help="Variety spec, e.g. severi:4")
    parser.add_argument("--points", type=int, default=1, help="Random general points")
