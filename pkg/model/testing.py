"""Random validated models for property tests."""
from qcore.testing import random_density, random_hermitian, random_partition, random_pure_state
from .validation import validate_system


def random_model(rng, dim, chi_parts=None, final_parts=None, mixed=False):
    """
    A random ``dim``-level model: random H_S and initial state, an observable
    over a random orthonormal partition and a complete random final family.
    """
    chi_parts = chi_parts or int(rng.integers(1, dim + 1))
    final_parts = final_parts or int(rng.integers(1, dim + 1))
    chi_blocks = random_partition(rng, dim, chi_parts)
    final_blocks = random_partition(rng, dim, final_parts)
    initial = random_density(rng, dim) if mixed else random_pure_state(rng, dim)
    return validate_system({
        'hamiltonian': random_hermitian(rng, dim),
        'initial': initial,
        'observable': {
            'values': list(range(chi_parts)),
            'projectors': [block @ block.conj().T for block in chi_blocks],
        },
        'finals': {
            'labels': [f"f{index}" for index in range(final_parts)],
            'projectors': [block @ block.conj().T for block in final_blocks],
            'complete': True,
        },
    })
