# zaremba-spectra - Utils Module
# Copyright (C) 2025 Nicholas Acord <ncacord@protonmail.com>

"""
Ambient services shared by the numerics and the command line.

logging_manager owns the `zaremba.*` logger tree; error_handler owns the
exception hierarchy and the mapping from error category to exit status.
"""

__version__ = "0.3.0"
__author__ = "Nicholas Acord"

from .error_handler import (
    ErrorCategory,
    ErrorHandler,
    ErrorSeverity,
    ZarembaError,
    exit_code_for,
    get_error_handler,
    handle_error,
    safe_execute,
)
from .logging_manager import ZarembaLogger, get_logger, log_context, logger_manager

__all__ = [
    "ErrorCategory",
    "ErrorHandler",
    "ErrorSeverity",
    "ZarembaError",
    "ZarembaLogger",
    "exit_code_for",
    "get_error_handler",
    "get_logger",
    "handle_error",
    "log_context",
    "logger_manager",
    "safe_execute",
]
