"""
Exception Classes for the slicexp toolkit

This module provides the error taxonomy used across the numerical library and
the command-line front end. Every error carries a stable error code, a context
dictionary and a severity, and is logged when it is raised.

Author: Slicexp Team
Version: 1.0.0
"""

import json
import logging
from datetime import datetime
from enum import Enum
from typing import Any, Dict, Optional


class ErrorSeverity(Enum):
    """Error severity levels"""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class ErrorCategory(Enum):
    """Error categories for better classification"""
    VALIDATION = "validation"
    INPUT = "input"
    DOMAIN = "domain"
    NUMERICAL = "numerical"
    PRECONDITION = "precondition"
    CONFIGURATION = "configuration"
    SYSTEM = "system"


class SliceRegularError(Exception):
    """
    Base exception class for all slicexp errors.

    Provides error tracking with context, severity and categorization.
    """

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None,
        severity: ErrorSeverity = ErrorSeverity.MEDIUM,
        category: ErrorCategory = ErrorCategory.SYSTEM,
        original_error: Optional[Exception] = None,
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.context = context or {}
        self.severity = severity
        self.category = category
        self.original_error = original_error
        self.timestamp = datetime.now().isoformat()

        self._log_error()

    _LOG_LEVELS = {
        ErrorSeverity.LOW: logging.INFO,
        ErrorSeverity.MEDIUM: logging.WARNING,
        ErrorSeverity.HIGH: logging.ERROR,
        ErrorSeverity.CRITICAL: logging.CRITICAL,
    }

    def _log_error(self) -> None:
        """Log at the level matching the severity, with the context inline"""
        parts = [f"[{self.error_code}] {self.message}"]
        if self.context:
            parts.append(f"context={self.context}")
        if self.original_error is not None:
            parts.append(f"cause={type(self.original_error).__name__}: {self.original_error}")
        logging.getLogger(__name__).log(
            self._LOG_LEVELS[self.severity],
            " | ".join(parts),
            extra={"error_code": self.error_code, "category": self.category.value},
        )

    def to_dict(self) -> Dict[str, Any]:
        """JSON-friendly form used in error reports"""
        data = {
            "error_code": self.error_code,
            "message": self.message,
            "severity": self.severity.value,
            "category": self.category.value,
            "context": self.context,
            "timestamp": self.timestamp,
        }
        if self.original_error is not None:
            data["cause"] = type(self.original_error).__name__
        return data

    def __str__(self) -> str:
        return f"{self.error_code}: {self.message}"


# Input-related exceptions
class ValidationError(SliceRegularError):
    """Raised when input validation fails"""
    def __init__(self, message: str, **kwargs: Any):
        super().__init__(
            message,
            severity=ErrorSeverity.LOW,
            category=ErrorCategory.VALIDATION,
            **kwargs
        )


class ExpressionError(SliceRegularError):
    """Raised when a function expression tree is malformed or uses an unknown op"""
    def __init__(self, message: str, **kwargs: Any):
        super().__init__(
            message,
            severity=ErrorSeverity.LOW,
            category=ErrorCategory.INPUT,
            **kwargs
        )


class ReportValidationError(SliceRegularError):
    """Raised when a report fails to re-validate in --check-report mode"""
    def __init__(self, message: str, **kwargs: Any):
        super().__init__(
            message,
            severity=ErrorSeverity.LOW,
            category=ErrorCategory.INPUT,
            **kwargs
        )


# Mathematical exceptions
class DomainError(SliceRegularError):
    """Raised when an operation leaves its algebraic domain (e.g. inverting 0)"""
    def __init__(self, message: str, **kwargs: Any):
        kwargs.setdefault("severity", ErrorSeverity.MEDIUM)
        super().__init__(
            message,
            category=ErrorCategory.DOMAIN,
            **kwargs
        )


class PointOutsideDomainError(DomainError):
    """Raised when a slice function is evaluated outside its circular domain"""
    def __init__(self, message: str, **kwargs: Any):
        super().__init__(message, severity=ErrorSeverity.LOW, **kwargs)


class ConvergenceError(SliceRegularError):
    """Raised when an iteration or a truncated series fails to reach its tolerance"""
    def __init__(self, message: str, **kwargs: Any):
        super().__init__(
            message,
            severity=ErrorSeverity.HIGH,
            category=ErrorCategory.NUMERICAL,
            **kwargs
        )


class PreconditionError(SliceRegularError):
    """Raised when an operation is called outside its precondition"""
    def __init__(self, message: str, **kwargs: Any):
        super().__init__(
            message,
            severity=ErrorSeverity.MEDIUM,
            category=ErrorCategory.PRECONDITION,
            **kwargs
        )


class NoGlobalSquareRootError(PreconditionError):
    """Raised when the symmetrized vector part has no slice-preserving square root"""


# Configuration and System
class ConfigurationError(SliceRegularError):
    """Raised when configuration is invalid or missing"""
    def __init__(self, message: str, **kwargs: Any):
        super().__init__(
            message,
            severity=ErrorSeverity.CRITICAL,
            category=ErrorCategory.CONFIGURATION,
            **kwargs
        )


# Error Handler Utilities
class ErrorHandler:
    """Utility class for converting errors and mapping them to exit codes"""

    INPUT_ERROR_EXIT_CODE = 2

    @staticmethod
    def handle_exception(
        exception: Exception,
        context: Optional[Dict[str, Any]] = None,
    ) -> SliceRegularError:
        """
        Convert any exception to a SliceRegularError with proper context.

        Args:
            exception: The original exception
            context: Additional context information

        Returns:
            SliceRegularError: Properly formatted error
        """
        if isinstance(exception, SliceRegularError):
            return exception

        # JSONDecodeError is a ValueError, so it has to be checked first
        if isinstance(exception, json.JSONDecodeError):
            return ExpressionError(
                message=f"Malformed JSON input: {exception}",
                error_code="MALFORMED_JSON",
                original_error=exception,
                context=context,
            )
        elif isinstance(exception, ValueError):
            return ValidationError(
                message=str(exception),
                original_error=exception,
                context=context,
            )
        elif isinstance(exception, ArithmeticError):
            return DomainError(
                message=str(exception),
                original_error=exception,
                context=context,
            )
        else:
            return SliceRegularError(
                message=str(exception) or exception.__class__.__name__,
                original_error=exception,
                context=context,
            )

    @staticmethod
    def exit_code_for(error: SliceRegularError) -> int:
        """
        Map an error to a CLI exit code.

        Identity violations are reported, not raised, and exit with 1; any error
        that prevents a report from being produced exits with 2.
        """
        return ErrorHandler.INPUT_ERROR_EXIT_CODE

    @staticmethod
    def format_error_response(error: SliceRegularError) -> Dict[str, Any]:
        """
        Format error for a JSON report.

        Args:
            error: The error to format

        Returns:
            Dict containing formatted error information
        """
        response = error.to_dict()
        response["exit_code"] = ErrorHandler.exit_code_for(error)
        return response
