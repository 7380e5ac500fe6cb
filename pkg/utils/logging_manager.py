# zaremba-spectra - Spectral toolkit for non-coercive mixed problems
# Copyright (C) 2025 Nicholas Acord <ncacord@protonmail.com>
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

"""
logging_manager.py - The `zaremba.*` logger tree.

One process-wide ZarembaLogger configures:

- zaremba.log      every record of the root `zaremba` logger (rotating)
- errors.log       ERROR and above only
- <component>.log  one file per numeric component, non-propagating
- stderr           colored console, WARNING by default

stdout is never written to; the CLI reserves it for CSV and JSON payloads.
Messages carry the active context stack as a prefix and keyword data as a
`| key=value` suffix, e.g. `[spectrum -> k=3] roots found | count=10`.
"""

import functools
import logging
import logging.handlers
import os
import sys
import traceback
from contextlib import contextmanager
from datetime import datetime
from typing import Any, Dict, Iterator, List, Optional

import colorlog
import orjson

ROOT = "zaremba"
COMPONENTS = ("coefficients", "ellipticity", "disk_spectrum", "family", "cli", "performance")

MIB = 1024 * 1024
FILE_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)-24s | %(funcName)-18s:%(lineno)-4d | %(message)s"
CONSOLE_FORMAT = "%(log_color)s%(levelname)-7s%(reset)s %(name)s: %(message)s"
CONSOLE_COLORS = {
    "DEBUG": "cyan",
    "INFO": "green",
    "WARNING": "yellow",
    "ERROR": "red",
    "CRITICAL": "bold_red",
}


def _rotating(path: str, level: int, max_bytes: int, backups: int) -> logging.Handler:
    handler = logging.handlers.RotatingFileHandler(
        path, maxBytes=max_bytes, backupCount=backups, delay=True
    )
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(FILE_FORMAT))
    return handler


class ZarembaLogger:
    """
    Singleton owner of the logger tree, the context stack and the session's
    error bookkeeping.
    """

    _instance: Optional["ZarembaLogger"] = None
    _initialized = False

    def __new__(cls) -> "ZarembaLogger":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        self._initialized = True

        self.session_id = datetime.now().strftime("%Y%m%d_%H%M%S")
        self.context_stack: List[str] = []
        self.error_count = 0
        self.log_dir = self._get_log_directory()
        os.makedirs(self.log_dir, exist_ok=True)

        self.console_handler = logging.StreamHandler(sys.stderr)
        self.console_handler.setLevel(logging.WARNING)
        self.console_handler.setFormatter(
            colorlog.ColoredFormatter(CONSOLE_FORMAT, log_colors=CONSOLE_COLORS)
        )
        self._configure_root()
        for component in COMPONENTS:
            self._configure_component(component)

        self.debug("logging ready", extra={"session_id": self.session_id, "log_dir": self.log_dir})

    def _get_log_directory(self) -> str:
        """ZS_LOG_DIR when set, else logs/ next to the packages."""
        override = os.environ.get("ZS_LOG_DIR")
        if override:
            return override
        project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        return os.path.join(project_root, "logs")

    def _configure_root(self) -> None:
        root = logging.getLogger(ROOT)
        root.setLevel(logging.DEBUG)
        root.handlers.clear()
        root.addHandler(_rotating(os.path.join(self.log_dir, "zaremba.log"), logging.DEBUG, 10 * MIB, 5))
        root.addHandler(_rotating(os.path.join(self.log_dir, "errors.log"), logging.ERROR, 5 * MIB, 3))
        root.addHandler(self.console_handler)

    def _configure_component(self, component: str) -> None:
        logger = logging.getLogger(f"{ROOT}.{component}")
        logger.setLevel(logging.DEBUG)
        logger.handlers.clear()
        logger.addHandler(_rotating(os.path.join(self.log_dir, f"{component}.log"), logging.DEBUG, 5 * MIB, 3))
        logger.addHandler(self.console_handler)
        logger.propagate = False

    def set_console_level(self, level: int) -> None:
        """-v maps to INFO, -q to ERROR."""
        self.console_handler.setLevel(level)

    def get_logger(self, name: str = ROOT) -> logging.Logger:
        return logging.getLogger(name)

    def push_context(self, context: str) -> None:
        self.context_stack.append(context)

    def pop_context(self) -> None:
        if self.context_stack:
            self.context_stack.pop()

    def _format_message(self, message: str, extra: Optional[Dict[str, Any]] = None) -> str:
        parts = []
        if self.context_stack:
            parts.append(f"[{' -> '.join(self.context_stack)}]")
        parts.append(message)
        text = " ".join(parts)
        if extra:
            text += " | " + " | ".join(f"{key}={value}" for key, value in extra.items())
        return text

    def _emit(self, level: int, message: str, extra: Optional[Dict[str, Any]], logger_name: str, **kwargs) -> None:
        self.get_logger(logger_name).log(level, self._format_message(message, extra), **kwargs)

    def debug(self, message: str, extra: Optional[Dict[str, Any]] = None, logger_name: str = ROOT) -> None:
        self._emit(logging.DEBUG, message, extra, logger_name)

    def info(self, message: str, extra: Optional[Dict[str, Any]] = None, logger_name: str = ROOT) -> None:
        self._emit(logging.INFO, message, extra, logger_name)

    def warning(self, message: str, extra: Optional[Dict[str, Any]] = None, logger_name: str = ROOT) -> None:
        self._emit(logging.WARNING, message, extra, logger_name)

    def error(
        self,
        message: str,
        exception: Optional[BaseException] = None,
        extra: Optional[Dict[str, Any]] = None,
        logger_name: str = ROOT,
    ) -> None:
        """Count and log an error; with an exception, also dump its details."""
        self._failure(logging.ERROR, message, exception, extra, logger_name)

    def critical(
        self,
        message: str,
        exception: Optional[BaseException] = None,
        extra: Optional[Dict[str, Any]] = None,
        logger_name: str = ROOT,
    ) -> None:
        self._failure(logging.CRITICAL, message, exception, extra, logger_name)

    def _failure(
        self,
        level: int,
        message: str,
        exception: Optional[BaseException],
        extra: Optional[Dict[str, Any]],
        logger_name: str,
    ) -> None:
        self.error_count += 1
        if exception is None:
            self._emit(level, message, extra, logger_name)
            return
        code = getattr(exception, "code", None)
        tagged = dict(extra or {}, exception=f"{type(exception).__name__}: {exception}")
        if code:
            tagged["code"] = code
        self._emit(level, message, tagged, logger_name, exc_info=exception)
        self._dump_error(level, message, exception, extra)

    def _dump_error(
        self,
        level: int,
        message: str,
        exception: BaseException,
        extra: Optional[Dict[str, Any]],
    ) -> None:
        """Append a record to error_details_<session>.json."""
        record = {
            "timestamp": datetime.now().isoformat(),
            "session_id": self.session_id,
            "level": logging.getLevelName(level),
            "message": message,
            "exception_type": type(exception).__name__,
            "exception_message": str(exception),
            "code": getattr(exception, "code", None),
            "details": {k: str(v) for k, v in (getattr(exception, "details", None) or {}).items()},
            "traceback": "".join(
                traceback.format_exception(type(exception), exception, exception.__traceback__)
            ),
            "context_stack": list(self.context_stack),
            "extra": {k: str(v) for k, v in (extra or {}).items()},
        }
        path = os.path.join(self.log_dir, f"error_details_{self.session_id}.json")
        try:
            records = []
            if os.path.exists(path):
                with open(path, "rb") as f:
                    records = orjson.loads(f.read())
            records.append(record)
            with open(path, "wb") as f:
                f.write(orjson.dumps(records, option=orjson.OPT_INDENT_2))
        except (OSError, orjson.JSONDecodeError) as e:
            print(f"zaremba: could not write error details: {e}", file=sys.stderr)

    def log_performance(self, operation: str, duration: float, extra: Optional[Dict[str, Any]] = None) -> None:
        """Record a wall-clock duration on zaremba.performance."""
        data: Dict[str, Any] = {"operation": operation, "duration_ms": f"{duration * 1000:.2f}"}
        data.update(extra or {})
        self.info(f"{operation} finished", extra=data, logger_name=f"{ROOT}.performance")

    def get_error_count(self) -> int:
        return self.error_count

    def get_session_id(self) -> str:
        return self.session_id


logger_manager = ZarembaLogger()


def get_logger(name: str = ROOT) -> logging.Logger:
    return logger_manager.get_logger(name)


@contextmanager
def log_context(context: str) -> Iterator[None]:
    """Prefix every message logged inside the block with `context`."""
    logger_manager.push_context(context)
    try:
        yield
    except Exception as e:
        logger_manager.error(f"failed inside '{context}'", exception=e)
        raise
    finally:
        logger_manager.pop_context()


def handle_exception(func):
    """Log any exception escaping `func` with its arguments, then re-raise."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except Exception as e:
            logger_manager.error(
                f"unhandled exception in {func.__name__}",
                exception=e,
                extra={"args": repr(args)[:200], "kwargs": repr(kwargs)[:200]},
            )
            raise

    return wrapper
