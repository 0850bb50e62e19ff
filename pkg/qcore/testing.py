"""Seeded random operators and states shared by the test suites."""
import numpy as np

from .models import Operator, State


def random_hermitian(rng, dim, scale=None):
    """GUE-like Hermitian matrix with spectral width of order one."""
    scale = scale if scale is not None else 1.0 / np.sqrt(dim)
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return Operator(scale * (raw + raw.conj().T) / 2, hermitian_hint=True)


def random_unitary(rng, dim):
    """Haar-random unitary via QR with phase-fixed R diagonal."""
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(raw)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_pure_state(rng, dim):
    vector = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return State.pure(vector / np.linalg.norm(vector))


def random_density(rng, dim):
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = raw @ raw.conj().T
    return State.mixed(rho / np.trace(rho).real)


def random_partition(rng, dim, parts):
    """
    Split a random orthonormal basis into ``parts`` non-empty groups.

    Returns the list of column blocks, one per group.
    """
    basis = random_unitary(rng, dim)
    cuts = np.sort(rng.choice(np.arange(1, dim), size=parts - 1, replace=False))
    return np.split(basis, cuts, axis=1)
