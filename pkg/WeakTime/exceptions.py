"""
Base error classes shared by every WeakTime app.

Apps subclass one of the two families below; the exception handler maps
``ValidationFailure`` to exit status 2 and every other ``WeakTimeError`` to 1.
"""


class WeakTimeError(Exception):
    """Root of all WeakTime errors. ``field`` names the offending object when known."""

    default_message = "WeakTime error."

    def __init__(self, message=None, field=None):
        self.field = field
        super().__init__(message or self.default_message)

    def __str__(self):
        message = super().__str__()
        if self.field:
            return f"{self.field}: {message}"
        return message


class ValidationFailure(WeakTimeError):
    """Input rejected: bad operator, state, scenario document or argument."""

    default_message = "Invalid input."


class ComputationError(WeakTimeError):
    """A computation could not produce a meaningful value at the requested point."""

    default_message = "Computation failed."
