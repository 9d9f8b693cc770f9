"""
Core package for slicexp

This package contains core functionality: the exception taxonomy, logging
configuration and input validation.
"""

from .exceptions import (
    ConfigurationError,
    ConvergenceError,
    DomainError,
    ErrorCategory,
    ErrorHandler,
    ErrorSeverity,
    ExpressionError,
    NoGlobalSquareRootError,
    PointOutsideDomainError,
    PreconditionError,
    ReportValidationError,
    SliceRegularError,
    ValidationError,
)

__all__ = [
    "SliceRegularError",
    "ValidationError",
    "ExpressionError",
    "ReportValidationError",
    "DomainError",
    "PointOutsideDomainError",
    "ConvergenceError",
    "PreconditionError",
    "NoGlobalSquareRootError",
    "ConfigurationError",
    "ErrorHandler",
    "ErrorSeverity",
    "ErrorCategory",
]
