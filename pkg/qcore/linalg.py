"""
Dense linear algebra on ``Operator`` and ``State`` values (hbar = 1).

Functions
---------
:func:`hermitian_eig`
    Ascending eigendecomposition of a Hermitian operator
:func:`evolve_unitary`
    exp(-iHt) through the eigenbasis of H
:func:`commutator`
    AB - BA
:func:`expectation`
    Tr(rho A), or <psi|A|psi> for pure states
:func:`frob_norm`
    Frobenius norm
:func:`ensemble`
    Eigen-ensemble of a state: weights and pure members
"""
import logging

import numpy as np
from scipy import linalg as sla

from .exceptions import DimMismatch, NotHermitian, NumericalFailure
from .models import Operator, Spectrum, State, hermiticity_defect

logger = logging.getLogger(__name__)

__all__ = ['is_hermitian', 'hermitian_eig', 'evolve_unitary', 'commutator',
           'expectation', 'frob_norm', 'ensemble']


def is_hermitian(A: Operator) -> bool:
    defect, tolerance = hermiticity_defect(A.matrix)
    return defect <= tolerance


def _require_hermitian(A: Operator, name='operator'):
    if A.hermitian_hint:
        return
    defect, tolerance = hermiticity_defect(A.matrix)
    if defect > tolerance:
        raise NotHermitian(f"max |A - A^dagger| = {defect:.3e} exceeds {tolerance:.3e}", field=name)


def _require_same_dim(*dims):
    if len(set(dims)) != 1:
        raise DimMismatch(f"dimensions {dims} differ")


def hermitian_eig(A: Operator) -> Spectrum:
    """Eigenvalues ascending; columns of ``basis`` are the matching eigenvectors."""
    _require_hermitian(A)
    symmetric = (A.matrix + A.matrix.conj().T) / 2
    try:
        eigenvalues, eigenvectors = sla.eigh(symmetric)
    except (sla.LinAlgError, ValueError) as exc:
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc
    return Spectrum(eigenvalues=eigenvalues, basis=Operator(eigenvectors))


def evolve_unitary(H: Operator, t: float, spectrum: Spectrum = None) -> Operator:
    """
    U(t) = exp(-iHt) = V diag(exp(-iE t)) V^dagger.

    Pass a precomputed ``spectrum`` of ``H`` to skip the decomposition.
    """
    if spectrum is None:
        spectrum = hermitian_eig(H)
    V = spectrum.basis.matrix
    phases = np.exp(-1j * spectrum.eigenvalues * t)
    return Operator((V * phases) @ V.conj().T)


def commutator(A: Operator, B: Operator) -> Operator:
    _require_same_dim(A.dim, B.dim)
    return Operator(A.matrix @ B.matrix - B.matrix @ A.matrix)


def expectation(rho: State, A: Operator) -> complex:
    _require_same_dim(rho.dim, A.dim)
    if rho.is_pure:
        psi = rho.vector
        return complex(np.vdot(psi, A.matrix @ psi))
    return complex(np.trace(rho.density.matrix @ A.matrix))


def frob_norm(A: Operator) -> float:
    return float(np.linalg.norm(A.matrix, 'fro'))


def ensemble(rho: State, cutoff: float = 1e-14):
    """
    Decompose a state into (weights, pure states).

    Pure states come back as a single member of weight 1; density matrices
    as their eigenvectors, dropping weights below ``cutoff``.
    """
    if rho.is_pure:
        return np.ones(1), [rho]
    spectrum = hermitian_eig(rho.density)
    weights, members = [], []
    for weight, vector in zip(spectrum.eigenvalues, spectrum.basis.matrix.T):
        if weight > cutoff:
            weights.append(weight)
            members.append(State.pure(vector / np.linalg.norm(vector)))
    weights = np.asarray(weights)
    logger.debug(f"Ensemble of {len(members)} pure members for a {rho.dim}-level density matrix")
    return weights / weights.sum(), members
