"""
Logging for the slicexp toolkit

Every logger lives under ``src``. Records go to stderr (stdout carries the
CLI report), either as one JSON object per line or as plain text, and may be
mirrored to a rotating file. Numerical code passes its diagnostics
(residuals, iteration counts, truncation depths) through ``extra=`` so they
show up as JSON fields.

Author: Slicexp Team
Version: 1.0.0
"""

import json
import logging
import logging.config
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Any, Dict, Iterator, Optional

import numpy as np

ROOT_LOGGER = "src"

_RECORD_ATTRS = set(logging.LogRecord("", 0, "", 0, "", None, None).__dict__) | {"message", "asctime"}


def _json_default(value: Any) -> Any:
    """Encode numpy scalars and arrays, complex numbers and anything else via str"""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    return str(value)


class StructuredFormatter(logging.Formatter):
    """
    One JSON object per record.

    Carries the timestamp (UTC), level, logger name, message, source location,
    any ``extra=`` fields and, when present, the exception type, message and
    traceback.
    """

    def format(self, record: logging.LogRecord) -> str:
        entry: Dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "location": f"{record.module}:{record.funcName}:{record.lineno}",
        }
        entry.update(
            (key, value)
            for key, value in record.__dict__.items()
            if key not in _RECORD_ATTRS and not key.startswith("_")
        )
        if record.exc_info:
            exc_type, exc_value, _ = record.exc_info
            entry["exception"] = {
                "type": exc_type.__name__ if exc_type else None,
                "message": str(exc_value) if exc_value else None,
                "traceback": self.formatException(record.exc_info),
            }
        return json.dumps(entry, default=_json_default)


class LoggingConfig:
    """dictConfig builders for the ``src`` logger tree"""

    TEXT_FORMAT = "%(asctime)s %(levelname)-8s %(name)s: %(message)s"
    MAX_LOG_BYTES = 5 * 1024 * 1024

    @staticmethod
    def get_logging_config(
        log_level: str = "WARNING",
        log_file: Optional[str] = None,
        enable_structured: bool = True,
    ) -> Dict[str, Any]:
        """
        Build a dictConfig mapping for the ``src`` logger.

        Args:
            log_level: Level name applied to the logger and its handlers
            log_file: Also write to this rotating file when given
            enable_structured: JSON lines when true, plain text otherwise

        Returns:
            Mapping accepted by ``logging.config.dictConfig``
        """
        formatter = "structured" if enable_structured else "standard"
        handlers: Dict[str, Dict[str, Any]] = {
            "console": {
                "class": "logging.StreamHandler",
                "stream": "ext://sys.stderr",
                "formatter": formatter,
                "level": log_level,
            }
        }
        if log_file:
            handlers["file"] = {
                "class": "logging.handlers.RotatingFileHandler",
                "filename": log_file,
                "maxBytes": LoggingConfig.MAX_LOG_BYTES,
                "backupCount": 3,
                "encoding": "utf-8",
                "formatter": formatter,
                "level": log_level,
            }

        return {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "standard": {"format": LoggingConfig.TEXT_FORMAT, "datefmt": "%H:%M:%S"},
                "structured": {"()": StructuredFormatter},
            },
            "handlers": handlers,
            "loggers": {
                ROOT_LOGGER: {"level": log_level, "handlers": sorted(handlers), "propagate": False},
            },
        }

    @staticmethod
    def setup_logging(
        log_level: str = "WARNING",
        log_file: Optional[str] = None,
        enable_structured: bool = True,
    ) -> None:
        """Apply ``get_logging_config``; called once per CLI invocation"""
        logging.config.dictConfig(LoggingConfig.get_logging_config(log_level, log_file, enable_structured))
        logging.getLogger(ROOT_LOGGER).debug(
            "Logging configured",
            extra={"log_level": log_level, "log_file": log_file, "structured": enable_structured},
        )


class LoggerMixin:
    """Gives a class a ``logger`` named ``<module>.<ClassName>``"""

    @property
    def logger(self) -> logging.Logger:
        cls = type(self)
        return logging.getLogger(f"{cls.__module__}.{cls.__name__}")


class OperationTimer:
    """Start time of one timed run; ``duration`` is set when the block exits"""

    def __init__(self, operation: str):
        self.operation = operation
        self.started = time.perf_counter()
        self.duration: Optional[float] = None


class PerformanceLogger:
    """
    Wall-clock timer for named numerical operations (root finding, grid
    sweeps, whole jobs). Durations are logged with ``operation``,
    ``duration_s`` and ``failed`` fields. Holds no per-run state.
    """

    def __init__(self, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger(f"{ROOT_LOGGER}.performance")

    @contextmanager
    def timer(self, operation: str, log_level: int = logging.INFO) -> Iterator[OperationTimer]:
        """
        Time the enclosed block and log its duration, also when it raises.

        Yields:
            The running ``OperationTimer``
        """
        run = OperationTimer(operation)
        failed = True
        try:
            yield run
            failed = False
        finally:
            run.duration = time.perf_counter() - run.started
            self.logger.log(
                log_level,
                "%s took %.3fs",
                operation,
                run.duration,
                extra={"operation": operation, "duration_s": round(run.duration, 6), "failed": failed},
            )
