"""
Error Handler Module
Provides the exception hierarchy and centralized error handling for the closure engine.
"""

import logging
import traceback
from typing import Optional, Dict, Any

logger = logging.getLogger(__name__)

# Process exit codes used by the command line front end
EXIT_OK = 0
EXIT_INPUT = 1
EXIT_REJECTED = 2
EXIT_ORACLE = 3


class ClosureError(Exception):
    """Base class for every error raised by the engine"""

    exit_code = EXIT_INPUT


class InputError(ClosureError):
    """Malformed input: unreadable file, bad JSON, bad polynomial text"""

    exit_code = EXIT_INPUT


class ConfigError(InputError):
    """Invalid environment configuration"""


class MathematicalRejection(ClosureError):
    """The input is well formed but outside what the engine accepts"""

    exit_code = EXIT_REJECTED


class ZeroInput(MathematicalRejection):
    """A zero entered a multiplicative computation"""


class DimensionMismatch(MathematicalRejection):
    """Operands have incompatible dimensions"""


class RingMismatch(MathematicalRejection):
    """Ideals live in different polynomial rings"""


class BudgetExceeded(MathematicalRejection):
    """A Groebner basis grew beyond the configured budget"""


class NotSquare(MathematicalRejection):
    """A square matrix was required"""


class EigenvaluesNotRational(MathematicalRejection):
    """The characteristic polynomial does not split over the rationals"""

    def __init__(self, message: str, cofactor: Any = None):
        super().__init__(message)
        self.cofactor = cofactor


class SingularInput(MathematicalRejection):
    """An invertible matrix was required"""


class ZeroEigenvalue(MathematicalRejection):
    """A zero eigenvalue was passed where only units are allowed"""


class DimensionTooLarge(MathematicalRejection):
    """Polytope volume requested beyond affine dimension 3"""


class NotUnipotent(MathematicalRejection):
    """The matrix is not unipotent in Jordan coordinates"""


class ZeroMatrix(MathematicalRejection):
    """The zero matrix generates no meaningful closure"""


class GroupModeOnSingular(MathematicalRejection):
    """Group mode needs an invertible matrix"""


class SingularInverse(MathematicalRejection):
    """Negative powers requested for a singular matrix"""


class OracleFailure(ClosureError):
    """The power-evaluation oracle found a counterexample"""

    exit_code = EXIT_ORACLE


class ErrorHandler:
    """Centralized error handling for the engine"""

    @staticmethod
    def log_error(error: Exception, context: str,
                  additional_data: Optional[Dict[str, Any]] = None) -> None:
        """Log errors with context and additional data"""
        try:
            error_msg = f"Error in {context}"

            if additional_data:
                error_msg += f" | Additional data: {additional_data}"

            if isinstance(error, MathematicalRejection):
                logger.warning(f"{error_msg}: {type(error).__name__}: {error}")
            else:
                logger.error(f"{error_msg}: {type(error).__name__}: {error}")
            logger.debug(f"Error traceback: {traceback.format_exc()}")

        except Exception as e:
            logger.critical(f"Failed to log error: {e}")

    @staticmethod
    def exit_code_for(error: BaseException) -> int:
        """Map an exception to the process exit code"""
        if isinstance(error, ClosureError):
            return error.exit_code
        return EXIT_INPUT

    @staticmethod
    def describe(error: BaseException) -> str:
        """One-line message for stderr"""
        name = type(error).__name__
        message = str(error).strip()
        if isinstance(error, EigenvaluesNotRational):
            message += " (try the `symbolic` command with explicit eigenvalues)"
        return f"{name}: {message}" if message else name

    @staticmethod
    def validate_input_text(text: Optional[str], max_length: int = 1_000_000) -> str:
        """Validate raw input text before parsing"""
        if text is None or not isinstance(text, str):
            raise InputError("no input given")

        stripped = text.strip()
        if not stripped:
            raise InputError("input is empty")

        if len(stripped) > max_length:
            raise InputError(f"input longer than {max_length} characters")

        if '\x00' in stripped:
            raise InputError("input contains NUL bytes")

        return stripped
