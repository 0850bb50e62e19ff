from WeakTime.exceptions import ValidationFailure, WeakTimeError


class ScenarioParseError(ValidationFailure):
    """The scenario document is not well-formed JSON or YAML. ``line`` is 1-based when known."""

    default_message = "Scenario document could not be parsed."

    def __init__(self, message=None, field=None, line=None):
        self.line = line
        super().__init__(message, field=field)

    def __str__(self):
        message = super().__str__()
        if self.line is not None:
            return f"line {self.line}: {message}"
        return message


class ScenarioValidationError(ValidationFailure):
    """A scenario field is missing or malformed; ``field`` is its dotted path, e.g. ``system.initial``."""

    default_message = "Invalid scenario."

    @property
    def path(self):
        return self.field


class OutputFailure(WeakTimeError):
    default_message = "Could not write output."


class UsageFailure(WeakTimeError):
    """The command line names something that does not exist, e.g. an unknown preset."""

    default_message = "Invalid command line."
