import dataclasses
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import fft


@dataclass(frozen=True, eq=False)
class DetectorState:
    """
    Pointer wavefunction on the periodic grid q_j = -Q + j dq, dq = 2Q / N.

    The shape parameters are kept next to the samples so the same pointer can
    be rebuilt with another coupling (see :meth:`with_gamma`).
    """
    grid: np.ndarray
    amplitudes: np.ndarray
    gamma: float
    sigma: float
    chirp: float = 0.0
    q0: float = 0.0
    p0: float = 0.0

    @property
    def N(self):
        return self.grid.size

    @property
    def dq(self):
        return float(self.grid[1] - self.grid[0])

    @property
    def Q(self):
        return -float(self.grid[0])

    @property
    def momenta(self):
        """Angular wavenumbers matching ``scipy.fft`` ordering."""
        return 2 * np.pi * fft.fftfreq(self.N, self.dq)

    def norm(self):
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.dq)

    def with_gamma(self, gamma):
        return dataclasses.replace(self, gamma=float(gamma))


@dataclass(frozen=True)
class DetectorMoments:
    mean_q: float
    mean_p: float
    re_qp: float
    coeff_c: float


@dataclass(frozen=True, eq=False)
class CompositeState:
    """
    System vectors psi_j, one per grid point, for |Psi> = sum_j dq^(1/2) |q_j> psi_j.

    ``spinors`` has shape (N, dim) and already carries the pointer amplitude.
    """
    detector: DetectorState
    spinors: np.ndarray
    chi_index: int
    t: float

    @property
    def dim(self):
        return self.spinors.shape[1]

    def norm(self):
        return float(np.sum(np.abs(self.spinors) ** 2) * self.detector.dq)


@dataclass(frozen=True, eq=False)
class CompositeEnsemble:
    """Convex combination of pure-state composites for a mixed initial state."""
    weights: np.ndarray
    members: Tuple[CompositeState, ...]

    @property
    def detector(self):
        return self.members[0].detector

    def norm(self):
        return float(sum(weight * member.norm() for weight, member in zip(self.weights, self.members)))


@dataclass(frozen=True)
class ConvergenceRow:
    gamma: float
    tau_oracle: float
    tau_formula: float
    error: float


@dataclass(frozen=True)
class ConvergenceTable:
    rows: Tuple[ConvergenceRow, ...]
    chi_index: int
    final_label: Optional[str]
    t: float
    detector_coeff: float

    def in_regime(self, row):
        return row.error < 0.1 * abs(row.tau_formula) + 1e-6

    def ratios(self):
        """error(gamma_next) / error(gamma) for consecutive rows that are both in the asymptotic regime."""
        ratios = []
        for previous, current in zip(self.rows, self.rows[1:]):
            if self.in_regime(previous) and self.in_regime(current) and previous.error > 0:
                ratios.append(current.error / previous.error)
        return ratios

    def observed_order(self):
        """Least-squares slope of log(error) against log(gamma) over the in-regime rows."""
        rows = [row for row in self.rows if self.in_regime(row) and row.error > 0]
        if len(rows) < 2:
            return math.nan
        slope, _ = np.polyfit(np.log([row.gamma for row in rows]), np.log([row.error for row in rows]), 1)
        return float(slope)

    @property
    def final_error(self):
        return self.rows[-1].error
