"""Configuration module for slowentropy."""

from .settings import Settings, get_settings, reload_settings
from .logging import get_logger, log_error, log_performance, setup_logging

__all__ = [
    "Settings",
    "get_settings",
    "reload_settings",
    "setup_logging",
    "get_logger",
    "log_error",
    "log_performance",
]
