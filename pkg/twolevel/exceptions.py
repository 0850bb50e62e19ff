from WeakTime.exceptions import ComputationError, ValidationFailure


class InvalidParameters(ValidationFailure):
    default_message = "Two-level parameters must be finite with Omega >= |omega|."


class ZeroFrequency(ComputationError):
    default_message = "Rabi frequency Omega is zero; the closed forms are undefined."


class SingularPostselection(ComputationError):
    default_message = "The final level is unpopulated at this time; the conditional time diverges."
