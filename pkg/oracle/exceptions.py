from WeakTime.exceptions import ValidationFailure


class InvalidDetector(ValidationFailure):
    default_message = "Detector needs a power-of-two grid and a positive width."


class GridTooSmall(ValidationFailure):
    default_message = "Pointer wavefunction does not decay at the grid boundary."


class ZeroCoupling(ValidationFailure):
    default_message = "Coupling gamma must be positive."


class MixedStateUnsupported(ValidationFailure):
    default_message = "Composite evolution needs a pure initial state; use evolve_ensemble for density matrices."


class InvalidSweep(ValidationFailure):
    default_message = "Couplings must be a non-empty, positive, strictly descending list."
