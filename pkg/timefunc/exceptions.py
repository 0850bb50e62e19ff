from WeakTime.exceptions import ComputationError, ValidationFailure


class NegativeTime(ValidationFailure):
    default_message = "Time must be finite and non-negative."


class UnknownMethod(ValidationFailure):
    default_message = "F can be evaluated with method 'exact' or 'quadrature'."


class IncompleteFinals(ValidationFailure):
    default_message = "Sum rules need a final family declared complete."


class VanishingPostselection(ComputationError):
    default_message = "Postselection probability is below the floor p_min."

    def __init__(self, message=None, field=None, probability=None):
        self.probability = probability
        super().__init__(message, field)


class ImaginaryResidue(ComputationError):
    default_message = "A quantity that must be real has a significant imaginary part."
