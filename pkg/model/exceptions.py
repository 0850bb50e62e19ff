from WeakTime.exceptions import ValidationFailure


class InvalidProjector(ValidationFailure):
    default_message = "Operator is not an orthogonal projector."


class IncompleteObservable(ValidationFailure):
    default_message = "Observable eigenprojectors do not sum to the identity."


class InvalidObservable(ValidationFailure):
    default_message = "Observable values and projectors are inconsistent."


class IncompleteFinalFamily(ValidationFailure):
    default_message = "Final projectors are declared complete but do not sum to the identity."


class InvalidFinals(ValidationFailure):
    default_message = "Final labels and projectors are inconsistent."


class DegenerateInput(ValidationFailure):
    default_message = "Vectors are linearly dependent."


class UnknownIndex(ValidationFailure):
    default_message = "No observable value with this index."


class UnknownFinal(ValidationFailure):
    default_message = "No final subspace with this label."


class MissingComponent(ValidationFailure):
    default_message = "This field is required."
