import logging
import traceback

from rest_framework.exceptions import ValidationError

from .exceptions import ComputationError, ValidationFailure, WeakTimeError

logger = logging.getLogger('weaktime.command')

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_INDEFINITE = 3


def custom_exception_handler(exc, context=None):
    """
    Map any exception raised by a command to a uniform payload.

    ``code`` is the process exit status: 2 for rejected input, 1 for
    everything else.
    """
    if isinstance(exc, ValidationFailure):
        custom_response = {
            "status": False,
            "code": EXIT_INVALID,
            "message": str(exc),
        }
        return custom_response

    if isinstance(exc, ValidationError):
        custom_response = {
            "status": False,
            "code": EXIT_INVALID,
            "message": exc.detail if hasattr(exc, 'detail') else "Invalid input.",
        }
        return custom_response

    if isinstance(exc, ComputationError):
        custom_response = {
            "status": False,
            "code": EXIT_FAILURE,
            "message": str(exc),
        }
        return custom_response

    if isinstance(exc, WeakTimeError):
        custom_response = {
            "status": False,
            "code": EXIT_FAILURE,
            "message": str(exc),
        }
        return custom_response

    if isinstance(exc, OSError):
        custom_response = {
            "status": False,
            "code": EXIT_FAILURE,
            "message": f"I/O error: {exc.strerror or exc}" + (f" ({exc.filename})" if exc.filename else ""),
        }
        return custom_response

    # Log the exception for better debugging
    logger.error(f"Unexpected exception in command {context or ''}: {exc}")
    logger.error(traceback.format_exc())

    custom_response = {
        "status": False,
        "code": EXIT_FAILURE,
        "message": f"An unexpected error occurred: {exc}",
    }
    return custom_response
