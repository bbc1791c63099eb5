"""Command-line entry point.

This module builds the argument parser, configures logging and the run
configuration, dispatches to the sub-command handlers and turns failures
into machine-readable error documents and exit codes.
"""

import argparse
import sys

from pydantic import ValidationError

from .commands import register_commands
from .commands.common import global_options, render, write
from .config import ConfigurationError, RunConfig, get_settings
from .dependencies import get_services
from .exceptions import (
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    InputValidationException,
    LabException,
    create_error_payload,
)
from .logging_config import get_logger, run_context, setup_logging
from .schemas.common import ErrorResponse

logger = get_logger("main")


def build_parser() -> argparse.ArgumentParser:
    """Create the ``projdiff`` argument parser.

    Returns:
        argparse.ArgumentParser: Parser with every sub-command registered
    """
    parser = argparse.ArgumentParser(
        prog="projdiff",
        description="Exact-arithmetic laboratory for projective differential invariants",
        parents=[global_options(defaults=True)],
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    register_commands(subparsers)
    return parser


def _fail(exc: Exception, module: str | None, op: str | None) -> int:
    document = ErrorResponse.model_validate(create_error_payload(exc, module, op))
    write(document.model_dump_json(indent=2) + "\n")
    return document.error.exit_code


def main(argv: list[str] | None = None) -> int:
    """Run one command.

    Args:
        argv: Arguments without the program name (``sys.argv[1:]`` if omitted)

    Returns:
        int: 0 when the command succeeded and its checks passed, 1 on a
        computation error or failed check, 2 on a usage error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        settings = get_settings()
    except ConfigurationError as e:
        return _fail(InputValidationException(str(e), field="settings"), "cli", "configure")
    if args.log_level:
        settings = settings.model_copy(update={"log_level": args.log_level})
    setup_logging(settings)

    try:
        config = RunConfig.from_settings(
            settings,
            seed=args.seed,
            retries=args.retries,
            height=args.height,
            output_format=args.output_format,
        )
    except ValidationError as e:
        locations = [err["loc"] for err in e.errors() if err["loc"]]
        field = str(locations[0][0]) if locations else None
        return _fail(InputValidationException("invalid run configuration", field=field), "cli", "configure")

    with run_context(args.command, config.seed):
        try:
            result = args.handler(args, get_services(config))
        except LabException as e:
            logger.warning(
                "Command failed",
                extra={"error_code": e.error_code, "module_name": args.module, "op": args.op},
            )
            return _fail(e, args.module, args.op)
        except Exception as e:
            return _fail(e, args.module, args.op)

        write(render(result.report, config.output_format))
        if not result.ok:
            logger.warning("Requested checks failed", extra={"module_name": args.module, "op": args.op})
            return EXIT_FAILURE
        return EXIT_OK


def run() -> None:
    """Console script entry point."""
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    run()
