"""Exception classes and the machine-readable error payload.

Every failure surfaced by the laboratory derives from ``LabException``. The
CLI turns them into ``{"error": {...}}`` documents on stdout and into the
process exit code.
"""

from typing import Any

from .logging_config import get_logger

logger = get_logger("errors")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class LabException(Exception):
    """Base exception class for laboratory errors.

    Provides a consistent error structure: a human-readable message, the
    process exit code, a machine-readable code and free-form details.
    """

    def __init__(
        self,
        message: str,
        exit_code: int = EXIT_FAILURE,
        error_code: str | None = None,
        details: dict[str, Any] | None = None,
    ) -> None:
        """Initialize laboratory exception.

        Args:
            message: Human-readable error message
            exit_code: Process exit code for the CLI
            error_code: Machine-readable error code
            details: Additional error details
        """
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code or self.__class__.__name__.lower().replace(
            "exception", "_error"
        )
        self.details = details or {}
        super().__init__(self.message)


class InputValidationException(LabException):
    """Exception for malformed variety specs, flags and arguments."""

    def __init__(
        self, message: str, field: str | None = None, value: Any | None = None
    ) -> None:
        details = {}
        if field:
            details["field"] = field
        if value is not None:
            details["value"] = str(value)

        super().__init__(
            message=message,
            exit_code=EXIT_USAGE,
            error_code="validation_error",
            details=details,
        )


class GenericityException(LabException):
    """Exception for random draws that never reached a generic configuration."""

    def __init__(self, message: str, attempts: int | None = None) -> None:
        details: dict[str, Any] = {}
        if attempts is not None:
            details["attempts"] = attempts

        super().__init__(
            message=message, error_code="genericity_error", details=details
        )


class ConsistencyException(LabException):
    """Exception for two methods or an internal invariant disagreeing."""

    def __init__(self, message: str, **diagnostics: Any) -> None:
        super().__init__(
            message=message, error_code="consistency_error", details=diagnostics
        )


class BudgetExceededException(LabException):
    """Exception for computations refused because they exceed a budget."""

    def __init__(self, message: str, required: int, budget: int) -> None:
        super().__init__(
            message=message,
            error_code="budget_error",
            details={"required": required, "budget": budget},
        )


def create_error_payload(
    exc: Exception, module: str | None = None, op: str | None = None
) -> dict[str, Any]:
    """Create the standardized error document.

    Args:
        exc: Raised exception
        module: Laboratory module the failing operation belongs to
        op: Failing operation

    Returns:
        dict: ``{"error": {"code", "message", "exit_code", "module", "op",
        "details"}}``
    """
    if isinstance(exc, LabException):
        code, message, exit_code, details = (
            exc.error_code,
            exc.message,
            exc.exit_code,
            exc.details,
        )
    else:
        logger.error(
            f"Unexpected exception: {type(exc).__name__} - {exc}",
            exc_info=exc,
            extra={"exception_type": type(exc).__name__, "module_name": module},
        )
        code, message, exit_code, details = (
            "internal_error",
            str(exc) or type(exc).__name__,
            EXIT_FAILURE,
            {},
        )

    return {
        "error": {
            "code": code,
            "message": message,
            "exit_code": exit_code,
            "module": module,
            "op": op,
            "details": details,
        }
    }
