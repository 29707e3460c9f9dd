# src/utils/error_handler.py
import logging
import sys
import traceback
from pathlib import Path
from typing import Optional

from src.constants import (
    ERROR_MESSAGES,
    EXIT_INTERNAL,
    EXIT_USAGE,
    LOG_DATE_FORMAT,
    LOG_FORMAT,
    LOG_LEVELS,
)


class PerfectCodesError(Exception):
    """Base class for every error raised by the library."""


class InvalidParameterError(PerfectCodesError, ValueError):
    """A parameter is outside the documented range."""


class DimensionError(InvalidParameterError):
    """Matrix or vector shapes do not fit together."""


class SingularMatrixError(PerfectCodesError, ArithmeticError):
    """Inverse requested for a matrix with zero determinant."""


class FieldMismatchError(InvalidParameterError):
    """Elements from two different finite fields were combined."""


class EnumerationCapExceeded(PerfectCodesError):
    """The requested vertex enumeration is larger than the configured cap."""

    def __init__(self, cost: int, cap: int):
        super().__init__(ERROR_MESSAGES["cap_exceeded"].format(cost=cost, cap=cap))
        self.cost = cost
        self.cap = cap


class CodeFormatError(PerfectCodesError):
    """A code file does not follow the text format."""


class IntractableSearchError(PerfectCodesError):
    """An exhaustive search would exceed the candidate pool cap or the search-space cap."""

    def __init__(self, message: str, estimate_bits: Optional[int] = None):
        super().__init__(message)
        self.estimate_bits = estimate_bits


class WitnessNotFoundError(PerfectCodesError):
    """No number-theoretic witness could be produced within the search bounds."""


class WitnessVerificationError(PerfectCodesError):
    """A produced witness failed its own re-verification."""


class ErrorHandler:
    """Centralized logging setup and error-to-exit-code mapping."""

    def __init__(self, level: str = "WARNING", log_file: Optional[str] = None):
        self.log_file = Path(log_file) if log_file else None
        self.setup_logging(level)

    def setup_logging(self, level: str):
        """Configure logging system."""
        handlers = [logging.StreamHandler(sys.stderr)]
        if self.log_file:
            self.log_file.parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(self.log_file))

        logging.basicConfig(
            level=LOG_LEVELS.get(level.upper(), logging.WARNING),
            format=LOG_FORMAT,
            datefmt=LOG_DATE_FORMAT,
            handlers=handlers,
            force=True
        )

        self.logger = logging.getLogger(__name__)

    def handle_error(self, error: Exception, context: str = None) -> int:
        """Log an error and return the exit code it maps to."""
        error_type = type(error).__name__

        if isinstance(error, PerfectCodesError):
            self.logger.error(f"Error in {context or 'unknown context'}: {error_type}: {error}")
            return EXIT_USAGE

        stack_trace = traceback.format_exc()
        self.logger.error(
            f"Internal error in {context or 'unknown context'}: "
            f"{error_type}: {error}\n{stack_trace}"
        )
        return EXIT_INTERNAL
