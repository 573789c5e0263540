"""Structured logging configuration with loguru."""

import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from loguru import logger

from .settings import get_settings


class InterceptHandler(logging.Handler):
    """Forward stdlib logging records (and captured warnings) to loguru."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        # Find the caller that issued the record
        frame, depth = logging.currentframe(), 2
        while frame and frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def format_record(record: Dict[str, Any]) -> str:
    """Human-readable format used in development."""
    format_string = (
        "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
        "<level>{level: <8}</level> | "
        "<cyan>{extra[name]}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
        "<level>{message}</level>"
    )
    if record["exception"]:
        format_string += "\n{exception}"
    return format_string + "\n"


def setup_logging() -> None:
    """Configure sinks from the current settings.

    Logs always go to stderr so that JSON and CSV on stdout stay clean.
    """
    settings = get_settings()
    logger.remove()
    logger.configure(extra={"name": "slowentropy"})

    if settings.is_development:
        logger.add(
            sys.stderr,
            format=format_record,
            level=settings.log_level,
            colorize=True,
            backtrace=True,
            diagnose=False,
        )
    else:
        logger.add(
            sys.stderr,
            level=settings.log_level,
            serialize=settings.log_format == "json",
            format="{time:YYYY-MM-DD HH:mm:ss} | {level} | {extra[name]}:{function}:{line} | {message}",
            colorize=False,
        )

    if settings.log_file:
        Path(settings.log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            settings.log_file,
            rotation=settings.log_rotation,
            retention=settings.log_retention,
            level=settings.log_level,
            serialize=True,
            backtrace=True,
            enqueue=True,
        )

    logging.basicConfig(handlers=[InterceptHandler()], level=0, force=True)
    logging.captureWarnings(True)
    for lib_name in ("py.warnings", "numpy", "scipy"):
        lib_logger = logging.getLogger(lib_name)
        lib_logger.handlers = [InterceptHandler()]
        lib_logger.propagate = False

    logger.debug(
        "Logging configured",
        level=settings.log_level,
        format=settings.log_format,
        file=settings.log_file,
        development=settings.is_development,
    )


def get_logger(name: Optional[str] = None):
    """Return a logger bound to a module name."""
    if name:
        return logger.bind(name=name)
    return logger


def log_error(error: Exception, context: Optional[Dict[str, Any]] = None) -> None:
    """Structured log record for a handled error."""
    error_data = {
        "error_type": type(error).__name__,
        "error_message": str(error),
    }
    if context:
        error_data.update(context)
    logger.error("Application Error", **error_data)


def log_performance(operation: str, duration_ms: float, metadata: Optional[Dict[str, Any]] = None) -> None:
    """Structured log record for a timed operation."""
    perf_data = {"operation": operation, "duration_ms": round(duration_ms, 3)}
    if metadata:
        perf_data.update(metadata)
    level = "WARNING" if duration_ms > 60_000 else "DEBUG"
    logger.log(level, "Performance Metric", **perf_data)
