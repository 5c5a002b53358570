"""Centralized error handling for the hom-twist command line."""

import logging
import traceback
from datetime import datetime
from typing import Any, Dict, Optional

from .exceptions import (
    ConfigurationError,
    HomAlgebraException,
    MissingStructureError,
    ParseError,
    PreconditionError,
    TheoremCheckFailed,
    UnknownInstanceError,
)

logger = logging.getLogger(__name__)


class ErrorType:
    """Standard error types for the application."""
    INPUT_ERROR = "INPUT_ERROR"
    PRECONDITION_ERROR = "PRECONDITION_ERROR"
    THEOREM_FAILURE = "THEOREM_FAILURE"
    CONFIGURATION_ERROR = "CONFIGURATION_ERROR"
    FILE_IO_ERROR = "FILE_IO_ERROR"
    INTERNAL_ERROR = "INTERNAL_ERROR"


class ExitCode:
    """Process exit codes; these are the only process-level contract."""
    OK = 0
    CHECK_FAILED = 1
    INPUT_ERROR = 2
    PRECONDITION = 3


class CLIErrorHandler:
    """Maps exceptions raised by commands to error types, log levels and exit codes."""

    def __init__(self):
        self.error_counts: Dict[str, int] = {}
        self.last_errors: Dict[str, str] = {}

    def classify(self, error: Exception) -> str:
        if isinstance(error, (ParseError, UnknownInstanceError)):
            return ErrorType.INPUT_ERROR
        if isinstance(error, (PreconditionError, MissingStructureError)):
            return ErrorType.PRECONDITION_ERROR
        if isinstance(error, TheoremCheckFailed):
            return ErrorType.THEOREM_FAILURE
        if isinstance(error, ConfigurationError):
            return ErrorType.CONFIGURATION_ERROR
        if isinstance(error, OSError):
            return ErrorType.FILE_IO_ERROR
        return ErrorType.INTERNAL_ERROR

    def handle_error(self, error: Exception, context: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """
        Log ``error`` and return a summary with the exit code to use.

        Returns:
            Dict with error_type, exit_code, message and (for theorem failures) the failing check ids
        """
        error_type = self.classify(error)
        details = self._extract_error_details(error, error_type, context)
        self._log_error(details)
        self._track_error(error_type)
        details["exit_code"] = self.exit_code(error_type)
        return details

    @staticmethod
    def exit_code(error_type: str) -> int:
        return {
            ErrorType.INPUT_ERROR: ExitCode.INPUT_ERROR,
            ErrorType.PRECONDITION_ERROR: ExitCode.PRECONDITION,
            ErrorType.CONFIGURATION_ERROR: ExitCode.INPUT_ERROR,
            ErrorType.FILE_IO_ERROR: ExitCode.INPUT_ERROR,
        }.get(error_type, ExitCode.CHECK_FAILED)

    def _extract_error_details(self, error: Exception, error_type: str, context: Optional[Dict]) -> Dict[str, Any]:
        details = {
            "error_type": error_type,
            "exception_type": type(error).__name__,
            "error_code": getattr(error, "error_code", type(error).__name__),
            "message": error.message if isinstance(error, HomAlgebraException) else str(error),
            "context": context or {},
            "timestamp": datetime.now().isoformat(),
            "traceback": traceback.format_exc() if logger.isEnabledFor(logging.DEBUG) else None,
        }
        if isinstance(error, TheoremCheckFailed) and error.report is not None:
            details["failed_checks"] = [c.check_id for c in error.report.failures()]
        if isinstance(error, PreconditionError) and error.offending is not None:
            details["offending"] = repr(error.offending)
        return details

    def _log_error(self, details: Dict[str, Any]):
        """Log error with appropriate level."""
        error_type = details["error_type"]
        if error_type in (ErrorType.INPUT_ERROR, ErrorType.PRECONDITION_ERROR, ErrorType.CONFIGURATION_ERROR):
            log_level = logging.WARNING
        else:
            log_level = logging.ERROR

        logger.log(log_level, f"{error_type} - {details['exception_type']}: {details['message']}")
        if details["context"]:
            logger.log(log_level, f"Context: {details['context']}")
        if details.get("failed_checks"):
            logger.log(log_level, f"Failed checks: {', '.join(details['failed_checks'])}")
        if logger.isEnabledFor(logging.DEBUG) and details["traceback"]:
            logger.debug(f"Traceback:\n{details['traceback']}")

    def _track_error(self, error_type: str):
        self.error_counts[error_type] = self.error_counts.get(error_type, 0) + 1
        self.last_errors[error_type] = datetime.now().isoformat()

    def get_error_statistics(self) -> Dict[str, Any]:
        return {
            "error_counts": self.error_counts,
            "last_errors": self.last_errors,
            "total_errors": sum(self.error_counts.values()),
        }


# Global error handler instance
error_handler = CLIErrorHandler()
