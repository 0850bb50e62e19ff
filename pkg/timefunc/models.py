from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from qcore.models import Operator

EXACT = 'exact'
QUADRATURE = 'quadrature'
METHODS = (EXACT, QUADRATURE)


@dataclass(frozen=True, eq=False)
class FOperator:
    """
    Accumulated operator F(chi, t): the interaction-picture projector onto
    the chi eigenspace integrated over [0, t].
    """
    chi_value: float
    chi_index: int
    t: float
    matrix: Operator
    method: str = EXACT

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.matrix.matrix)


@dataclass(frozen=True)
class ConditionalResult:
    tau1: float
    tau2: float
    prob_f: float
    commutator_norm: float
    definite: bool

    def combined(self, detector_coeff):
        """tau1 + c * tau2 for a detector with coefficient ``c``."""
        return self.tau1 + detector_coeff * self.tau2


@dataclass(frozen=True)
class SumRuleReport:
    """
    Residuals of the averaging sum rules at one time ``t``.

    Keys are observable indices for the per-chi entries and final labels for
    the per-final entries.
    """
    t: float
    probabilities: Dict[str, float]
    weighted_tau1: Dict[int, float] = field(default_factory=dict)
    weighted_tau2: Dict[int, float] = field(default_factory=dict)
    completeness_tau1: Dict[str, float] = field(default_factory=dict)
    completeness_tau2: Dict[str, float] = field(default_factory=dict)
    skipped: Tuple[str, ...] = ()

    @property
    def max_residual(self):
        residuals = [
            *self.weighted_tau1.values(),
            *self.weighted_tau2.values(),
            *self.completeness_tau1.values(),
            *self.completeness_tau2.values(),
        ]
        return max(residuals, default=0.0)

    def holds(self, tolerance=1e-8):
        return self.max_residual <= tolerance
