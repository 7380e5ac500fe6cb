# zaremba-spectra - Spectral toolkit for non-coercive mixed problems
# Copyright (C) 2025 Nicholas Acord <ncacord@protonmail.com>

"""
error_handler.py - Error types and centralized error handling for zaremba-spectra.

Defines the domain exception hierarchy raised by the numeric modules and an
ErrorHandler that classifies, logs and reports failures for the CLI.
"""

import sys
import traceback
from collections import Counter
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, TextIO, Tuple, Type

from utils.logging_manager import log_context, logger_manager


class ErrorSeverity(Enum):
    """Error severity levels for proper handling and user notification."""

    LOW = "low"  # Diagnostic only, run continues
    MEDIUM = "medium"  # A check or sub-result is unavailable
    HIGH = "high"  # The requested command cannot complete
    CRITICAL = "critical"  # Unrecoverable


class ErrorCategory(Enum):
    """Categories of errors for classification and exit-code mapping."""

    CONFIG = "config"  # Invalid run configuration or coefficient spec
    IO = "io"  # Reading/writing artifacts
    DOMAIN = "domain"  # Inputs outside the mathematical preconditions
    LINALG = "linalg"  # Matrix structure problems (symmetry, singularity)
    NUMERIC = "numeric"  # Root finding, chain extension, spectrum size
    UNKNOWN = "unknown"  # Unclassified errors


class ZarembaError(Exception):
    """Base class of every error raised by the library."""

    category = ErrorCategory.UNKNOWN
    code = "UNK000"

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message or self.__class__.__name__)
        self.details = details


class NonHermitian(ZarembaError):
    category = ErrorCategory.LINALG
    code = "LIN001"


class NotPSD(ZarembaError):
    category = ErrorCategory.LINALG
    code = "LIN002"


class SingularC(ZarembaError):
    category = ErrorCategory.LINALG
    code = "LIN003"


class CharacteristicLambda(ZarembaError):
    category = ErrorCategory.LINALG
    code = "LIN004"


class ZeroPhaseUndefined(ZarembaError):
    category = ErrorCategory.DOMAIN
    code = "DOM001"


class NotUnitNormal(ZarembaError):
    category = ErrorCategory.DOMAIN
    code = "DOM002"


class EmptySamples(ZarembaError):
    category = ErrorCategory.DOMAIN
    code = "DOM003"


class OscillationTooLarge(ZarembaError):
    category = ErrorCategory.DOMAIN
    code = "DOM004"


class RhoOutOfRange(ZarembaError):
    category = ErrorCategory.DOMAIN
    code = "DOM005"


class OrderNegative(ZarembaError):
    category = ErrorCategory.DOMAIN
    code = "DOM006"


class BracketingFailed(ZarembaError):
    category = ErrorCategory.NUMERIC
    code = "NUM001"


class InsufficientSpectrum(ZarembaError):
    category = ErrorCategory.NUMERIC
    code = "NUM002"


class ChainIncomplete(ZarembaError):
    category = ErrorCategory.NUMERIC
    code = "NUM003"


class ConfigInvalid(ZarembaError):
    category = ErrorCategory.CONFIG
    code = "CFG001"


class UnknownSuite(ZarembaError):
    category = ErrorCategory.CONFIG
    code = "CFG002"


class IoError(ZarembaError):
    category = ErrorCategory.IO
    code = "IO001"


@dataclass
class ErrorInfo:
    """One handled error as recorded in the history and shown to the user."""

    id: str  # library code (LIN002, ...) or a per-category counter
    category: ErrorCategory
    severity: ErrorSeverity
    message: str
    technical_details: str
    user_message: str
    suggestions: List[str]
    timestamp: datetime
    context: List[str]
    recoverable: bool


@dataclass(frozen=True)
class ErrorPattern:
    """User-facing text for a known failure."""

    user_message: str
    suggestions: Tuple[str, ...]
    severity: Optional[ErrorSeverity] = None


KNOWN_ERRORS: Dict[Type[BaseException], ErrorPattern] = {
    BracketingFailed: ErrorPattern(
        "Not enough sign changes of the boundary residual were found.",
        ("Request fewer eigenvalues per wavenumber", "Check that d and rho are within range"),
        ErrorSeverity.HIGH,
    ),
    ChainIncomplete: ErrorPattern(
        "Root vectors could not be completed at the residual gate.",
        ("The characteristic value may be ill-conditioned", "Try a smaller perturbation norm"),
    ),
    CharacteristicLambda: ErrorPattern(
        "L(lambda) is numerically singular at the requested lambda.",
        ("Move lambda away from the characteristic set", "List characteristic values with --char-values"),
    ),
    SingularC: ErrorPattern(
        "The weight matrix C is singular and the pencil is not regular.",
        ("Check the family file's C block",),
    ),
    OscillationTooLarge: ErrorPattern(
        "The phase of a0^(2) oscillates too much for the corner theory to apply.",
        ("Lower the oscillation of the coefficient", "Raise rho or lower n"),
    ),
    ConfigInvalid: ErrorPattern(
        "The run configuration is invalid.",
        ("Check the config file is a non-empty JSON object", "Run with --help for accepted flags and ranges"),
    ),
    UnknownSuite: ErrorPattern(
        "No property suite has that name.",
        ("Run `zaremba verify --help` for the list of suites",),
    ),
    IoError: ErrorPattern("An input or output file could not be processed.", ("Check paths and permissions",)),
}

CATEGORY_TEXT: Dict[ErrorCategory, ErrorPattern] = {
    ErrorCategory.CONFIG: ErrorPattern(
        "The run configuration is invalid.", ("Run with --help for accepted flags and ranges",)
    ),
    ErrorCategory.IO: ErrorPattern("An input or output file could not be processed.", ("Check paths and permissions",)),
    ErrorCategory.DOMAIN: ErrorPattern(
        "An input lies outside the supported range.", ("Check the documented parameter ranges",)
    ),
    ErrorCategory.LINALG: ErrorPattern("A matrix did not have the required structure.", ("Inspect the input matrices",)),
    ErrorCategory.NUMERIC: ErrorPattern(
        "A numerical procedure did not converge.",
        ("Reduce the requested counts", "Check the log files for more details"),
    ),
}

DEFAULT_SEVERITY = {
    ErrorCategory.CONFIG: ErrorSeverity.HIGH,
    ErrorCategory.IO: ErrorSeverity.HIGH,
    ErrorCategory.LINALG: ErrorSeverity.HIGH,
    ErrorCategory.DOMAIN: ErrorSeverity.MEDIUM,
    ErrorCategory.NUMERIC: ErrorSeverity.MEDIUM,
    ErrorCategory.UNKNOWN: ErrorSeverity.HIGH,
}


def classify(exception: BaseException) -> ErrorCategory:
    """Category of a library or foreign exception."""
    if isinstance(exception, ZarembaError):
        return exception.category
    if isinstance(exception, (OSError, EOFError)):
        return ErrorCategory.IO
    # numpy and scipy LinAlgError subclass ValueError
    name = type(exception).__name__.lower()
    if "linalg" in name:
        return ErrorCategory.LINALG
    if isinstance(exception, (ValueError, TypeError, KeyError)):
        return ErrorCategory.CONFIG
    if isinstance(exception, (FloatingPointError, OverflowError, ZeroDivisionError)):
        return ErrorCategory.NUMERIC
    return ErrorCategory.UNKNOWN


def known_pattern(exception: BaseException) -> Optional[ErrorPattern]:
    for klass in type(exception).__mro__:
        if klass in KNOWN_ERRORS:
            return KNOWN_ERRORS[klass]
    return None


class ErrorHandler:
    """
    Classifies failures, logs them, tells the user on `stream` (stderr by
    default) and keeps a history for the run report.
    """

    def __init__(self, stream: Optional[TextIO] = None):
        self.stream = stream
        self.error_history: List[ErrorInfo] = []
        self._counters: Counter = Counter()

    def _classify_exception(self, exception: BaseException) -> ErrorCategory:
        return classify(exception)

    def _classify_severity(self, exception: BaseException, category: ErrorCategory) -> ErrorSeverity:
        if isinstance(exception, (MemoryError, SystemExit, KeyboardInterrupt)):
            return ErrorSeverity.CRITICAL
        pattern = known_pattern(exception)
        if pattern is not None and pattern.severity is not None:
            return pattern.severity
        return DEFAULT_SEVERITY[category]

    def _error_id(self, exception: BaseException, category: ErrorCategory) -> str:
        if isinstance(exception, ZarembaError):
            return exception.code
        self._counters[category] += 1
        return f"{category.name}{self._counters[category]:03d}"

    def handle_exception(
        self,
        exception: BaseException,
        context: Optional[List[str]] = None,
        user_message: Optional[str] = None,
        severity: Optional[ErrorSeverity] = None,
    ) -> ErrorInfo:
        """
        Classify, log and report one exception.

        Args:
            exception: the failure
            context: breadcrumbs such as the command name
            user_message: replaces the pattern or category message
            severity: overrides the classification

        Returns:
            The recorded ErrorInfo.
        """
        category = self._classify_exception(exception)
        severity = severity or self._classify_severity(exception, category)
        text = known_pattern(exception) or CATEGORY_TEXT.get(category)

        info = ErrorInfo(
            id=self._error_id(exception, category),
            category=category,
            severity=severity,
            message=str(exception),
            technical_details="".join(
                traceback.format_exception(type(exception), exception, exception.__traceback__)
            ),
            user_message=user_message or (text.user_message if text else f"An error occurred: {exception}"),
            suggestions=list(text.suggestions) if text else ["Check the log files for more details"],
            timestamp=datetime.now(),
            context=list(context or []),
            recoverable=severity != ErrorSeverity.CRITICAL
            and category in (ErrorCategory.NUMERIC, ErrorCategory.DOMAIN),
        )
        self._record(info)
        return info

    def _record(self, info: ErrorInfo) -> None:
        self.error_history.append(info)
        extra = {
            "error_id": info.id,
            "category": info.category.value,
            "severity": info.severity.value,
            "context": "/".join(info.context) or "-",
        }
        with log_context(f"error:{info.category.value}"):
            if info.severity in (ErrorSeverity.HIGH, ErrorSeverity.CRITICAL):
                logger_manager.error(info.message, extra=extra)
            else:
                logger_manager.warning(info.message, extra=extra)
        if info.severity != ErrorSeverity.LOW:
            self._notify(info)

    def _notify(self, info: ErrorInfo) -> None:
        stream = self.stream or sys.stderr
        lines = [f"[{info.id}] {info.user_message}", f"  {info.message}"]
        lines += [f"  hint: {s}" for s in info.suggestions]
        print("\n".join(lines), file=stream)

    def get_error_statistics(self) -> Dict[str, Any]:
        """Counts by category and severity plus the five most recent errors."""
        if not self.error_history:
            return {"total_errors": 0}
        return {
            "total_errors": len(self.error_history),
            "by_category": dict(Counter(e.category.value for e in self.error_history)),
            "by_severity": dict(Counter(e.severity.value for e in self.error_history)),
            "recent_errors": [
                {
                    "id": e.id,
                    "message": e.message,
                    "category": e.category.value,
                    "severity": e.severity.value,
                    "timestamp": e.timestamp.isoformat(),
                }
                for e in self.error_history[-5:]
            ],
        }


def exit_code_for(exception: BaseException) -> int:
    """2 for configuration and I/O failures, 1 for everything else."""
    return 2 if classify(exception) in (ErrorCategory.CONFIG, ErrorCategory.IO) else 1


_error_handler_instance: Optional[ErrorHandler] = None


def get_error_handler() -> ErrorHandler:
    global _error_handler_instance
    if _error_handler_instance is None:
        _error_handler_instance = ErrorHandler()
    return _error_handler_instance


def handle_error(
    exception: BaseException,
    context: Optional[List[str]] = None,
    user_message: Optional[str] = None,
    severity: Optional[ErrorSeverity] = None,
) -> ErrorInfo:
    return get_error_handler().handle_exception(exception, context, user_message, severity)


def safe_execute(
    func: Callable,
    *args,
    context: Optional[List[str]] = None,
    user_message: Optional[str] = None,
    default_return: Any = None,
    **kwargs,
) -> Any:
    """Call func; on any exception, hand it to the global handler and return default_return."""
    try:
        return func(*args, **kwargs)
    except Exception as e:
        handle_error(e, context=context or [func.__name__], user_message=user_message)
        return default_return
