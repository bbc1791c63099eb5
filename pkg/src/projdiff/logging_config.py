"""Logging configuration for structured logging.

This module provides structured JSON logging on stderr, a run-context filter
that stamps every record with the command and seed of the current run, and
helpers for logging computations with timing information.
"""

import json
import logging
import logging.config
import sys
import time
import uuid
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from datetime import datetime, timezone
from typing import Any

from .config import Settings

UTC = timezone.utc

_RESERVED_ATTRS = frozenset(
    {
        "name",
        "msg",
        "args",
        "levelname",
        "levelno",
        "pathname",
        "filename",
        "module",
        "lineno",
        "funcName",
        "created",
        "msecs",
        "relativeCreated",
        "thread",
        "threadName",
        "processName",
        "process",
        "taskName",
        "getMessage",
        "exc_info",
        "exc_text",
        "stack_info",
        "message",
    }
)

_run_context: ContextVar[dict[str, Any] | None] = ContextVar(
    "projdiff_run_context", default=None
)


class JSONFormatter(logging.Formatter):
    """JSON formatter for structured logging.

    Outputs log records as JSON objects with timestamp, level, message,
    source location and any extra context attached to the record.
    """

    def format(self, record: logging.LogRecord) -> str:
        """Format log record as JSON.

        Args:
            record: Log record to format

        Returns:
            JSON formatted log string
        """
        log_data: dict[str, Any] = {
            "timestamp": datetime.now(UTC).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        if record.exc_info:
            log_data["exception"] = {
                "type": record.exc_info[0].__name__ if record.exc_info[0] else None,
                "message": str(record.exc_info[1]) if record.exc_info[1] else None,
                "traceback": self.formatException(record.exc_info),
            }

        extra_fields = {
            key: value
            for key, value in record.__dict__.items()
            if key not in _RESERVED_ATTRS
        }
        if extra_fields:
            log_data["extra"] = extra_fields

        return json.dumps(log_data, default=str, ensure_ascii=False)


class RunContextFilter(logging.Filter):
    """Logging filter adding run context (run id, command, seed) to records."""

    def filter(self, record: logging.LogRecord) -> bool:
        """Add run context to log record.

        Args:
            record: Log record to modify

        Returns:
            True to allow the record to be logged
        """
        context = _run_context.get() or {}
        record.run_id = getattr(record, "run_id", context.get("run_id"))
        record.command = getattr(record, "command", context.get("command"))
        record.seed = getattr(record, "seed", context.get("seed"))
        return True


@contextmanager
def run_context(command: str, seed: int) -> Iterator[str]:
    """Bind command and seed to every record logged inside the block.

    Yields:
        The generated run id
    """
    run_id = uuid.uuid4().hex[:12]
    token = _run_context.set({"run_id": run_id, "command": command, "seed": seed})
    try:
        yield run_id
    finally:
        _run_context.reset(token)


def setup_logging(settings: Settings) -> None:
    """Setup logging configuration based on settings.

    Reports go to stdout, so every handler writes to stderr.

    Args:
        settings: Settings containing logging configuration
    """
    log_level = getattr(logging, settings.log_level.upper(), logging.WARNING)

    logging_config = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "json": {
                "()": JSONFormatter,
            },
            "simple": {
                "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
                "datefmt": "%Y-%m-%d %H:%M:%S",
            },
        },
        "filters": {
            "run_context": {
                "()": RunContextFilter,
            }
        },
        "handlers": {
            "console": {
                "class": "logging.StreamHandler",
                "level": log_level,
                "formatter": "json" if not settings.debug else "simple",
                "filters": ["run_context"],
                "stream": sys.stderr,
            }
        },
        "loggers": {
            "projdiff": {
                "level": log_level,
                "handlers": ["console"],
                "propagate": False,
            },
        },
        "root": {"level": "WARNING", "handlers": ["console"]},
    }

    logging.config.dictConfig(logging_config)

    logger = logging.getLogger("projdiff")
    logger.debug(
        "Logging configured",
        extra={
            "log_level": settings.log_level,
            "debug_mode": settings.debug,
            "formatter": "json" if not settings.debug else "simple",
        },
    )


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance with the specified name.

    Args:
        name: Logger name (prefixed with 'projdiff.' when missing)

    Returns:
        Logger instance
    """
    if not name.startswith("projdiff."):
        name = f"projdiff.{name}"

    return logging.getLogger(name)


def log_computation(
    operation: str,
    target: str,
    success: bool = True,
    duration: float | None = None,
    error: str | None = None,
    **kwargs: Any,
) -> None:
    """Log a finished computation.

    Args:
        operation: Operation name (secant_dim, jet_tower, ...)
        target: Object the operation ran on (variety or space name)
        success: Whether the computation succeeded
        duration: Wall time in seconds
        error: Error message (if applicable)
        **kwargs: Additional context data
    """
    logger = get_logger("computation")
    level = logging.INFO if success else logging.ERROR
    message = f"Computation {operation} on {target}"

    if not success and error:
        message += f" failed: {error}"

    extra_data: dict[str, Any] = {
        "event_type": "computation",
        "operation": operation,
        "target": target,
        "success": success,
        "duration": round(duration, 4) if duration is not None else None,
    }

    if error:
        extra_data["error"] = error

    extra_data.update(kwargs)

    logger.log(level, message, extra=extra_data)


@contextmanager
def timed_computation(operation: str, target: str, **kwargs: Any) -> Iterator[None]:
    """Time the enclosed block and report it through ``log_computation``.

    Exceptions are logged with ``success=False`` and re-raised.
    """
    start_time = time.time()
    try:
        yield
    except Exception as e:
        log_computation(
            operation,
            target,
            success=False,
            duration=time.time() - start_time,
            error=str(e),
            **kwargs,
        )
        raise
    log_computation(operation, target, duration=time.time() - start_time, **kwargs)
