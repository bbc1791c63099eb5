"""Command-line sub-commands.

Each module registers its sub-commands on the shared sub-parser collection.
"""

from typing import Any

from . import clifford, defects, matspace, osc, report, variety


def register_commands(subparsers: Any) -> None:
    """Register every sub-command."""
    for module in (variety, defects, matspace, clifford, osc, report):
        module.register(subparsers)


__all__ = ["register_commands"]
