import numpy as np

from model.validation import validate_system
from .models import TwoLevelParams

LEVEL_0 = np.diag([1.0, 0.0])
LEVEL_1 = np.diag([0.0, 1.0])
FINAL_LABELS = ('0', '1')


def two_level_hamiltonian(params: TwoLevelParams):
    """
    H = omega sigma_3 / 2 + v sigma_+ + v* sigma_-, with |0> the lower level.

    Basis order is (|0>, |1>); sigma_+ raises |0> to |1>.
    """
    half = params.omega / 2
    return np.array([
        [-half, np.conj(params.v)],
        [params.v, half],
    ], dtype=complex)


def build_two_level(omega, v=0j):
    """
    Validated two-level model starting in |0>.

    The observable is the level index (values 0 and 1); the finals are the
    two levels, labelled '0' and '1', declared complete.
    """
    params = omega if isinstance(omega, TwoLevelParams) else TwoLevelParams(omega=omega, v=v)
    return validate_system({
        'hamiltonian': two_level_hamiltonian(params),
        'initial': [1.0, 0.0],
        'observable': {'values': [0.0, 1.0], 'projectors': [LEVEL_0, LEVEL_1]},
        'finals': {'labels': list(FINAL_LABELS), 'projectors': [LEVEL_0, LEVEL_1], 'complete': True},
    })
