from WeakTime.exceptions import ValidationFailure, ComputationError


class InvalidOperator(ValidationFailure):
    default_message = "Operator must be a finite square complex matrix."


class NotHermitian(ValidationFailure):
    default_message = "Operator is not Hermitian within tolerance."


class DimMismatch(ValidationFailure):
    default_message = "Dimensions do not match."


class InvalidState(ValidationFailure):
    default_message = "State is not a valid pure state or density matrix."


class NumericalFailure(ComputationError):
    default_message = "Numerical routine did not converge."
