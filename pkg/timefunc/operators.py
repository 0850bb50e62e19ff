"""
Interaction-picture operators and the accumulated operator F(chi, t).

F is evaluated either exactly in the eigenbasis of H_S, where each matrix
element integrates in closed form, or by composite Simpson quadrature of the
interaction-picture projector over [0, t]. The quadrature path exists to
validate the exact one.
"""
import logging
import math

import numpy as np
from scipy.integrate import simpson

from WeakTime.conf import get_setting
from qcore.exceptions import DimMismatch
from qcore.linalg import evolve_unitary, frob_norm
from qcore.models import Operator
from .exceptions import NegativeTime, UnknownMethod
from .models import EXACT, METHODS, FOperator

logger = logging.getLogger(__name__)

# below this |omega t| the phase integral switches to its Taylor series
TAYLOR_GUARD = 1e-8


def require_time(t):
    try:
        t = float(t)
    except (TypeError, ValueError):
        raise NegativeTime(f"got {t!r}", field='t') from None
    if not math.isfinite(t) or t < 0:
        raise NegativeTime(f"got {t}", field='t')
    return t


def interaction_picture(model, A: Operator, t) -> Operator:
    """U_S(t)^dagger A U_S(t)."""
    if A.dim != model.dim:
        raise DimMismatch(f"operator has dimension {A.dim}, system has {model.dim}")
    if t == 0:
        return A
    U = evolve_unitary(model.hamiltonian, t, spectrum=model.spectrum).matrix
    rotated = U.conj().T @ A.matrix @ U
    if A.hermitian_hint:
        rotated = (rotated + rotated.conj().T) / 2
    return Operator(rotated, hermitian_hint=A.hermitian_hint)


def phase_integral(omega, t):
    """
    (exp(i omega t) - 1) / (i omega), elementwise, equal to t at omega = 0.

    Near-degenerate frequencies use t (1 + i omega t / 2 - (omega t)^2 / 6).
    """
    omega = np.asarray(omega, dtype=float)
    x = omega * t
    small = np.abs(x) < TAYLOR_GUARD
    safe = np.where(small, 1.0, omega)
    # (exp(ix) - 1) / i = sin x + 2i sin^2(x/2)
    exact = (np.sin(x) + 2j * np.sin(x / 2) ** 2) / safe
    series = t * (1 + 0.5j * x - x ** 2 / 6)
    return np.where(small, series, exact)


def default_quadrature_samples(model, t):
    """N = max(200, ceil(20 ||H_S||_F t)), rounded up to an even count of intervals."""
    samples = max(
        get_setting('QUADRATURE_MIN_SAMPLES'),
        math.ceil(get_setting('QUADRATURE_POINTS_PER_PERIOD') * frob_norm(model.hamiltonian) * t),
    )
    return samples + samples % 2


def _exact_F(model, projector, t):
    V = model.spectrum.basis.matrix
    D = V.conj().T @ projector.matrix @ V
    F_eig = D * phase_integral(model.spectrum.bohr_frequencies(), t)
    return V @ F_eig @ V.conj().T


def _quadrature_F(model, projector, t, samples):
    times = np.linspace(0.0, t, samples + 1)
    V = model.spectrum.basis.matrix
    phases = np.exp(-1j * np.outer(times, model.spectrum.eigenvalues))
    # one propagator per sample, stacked along axis 0
    U = (V[None, :, :] * phases[:, None, :]) @ V.conj().T
    U_dagger = np.conj(np.swapaxes(U, 1, 2))
    integrand = U_dagger @ projector.matrix @ U
    logger.debug(f"Simpson quadrature of F over {samples} intervals (h = {t / samples:.3e})")
    return simpson(integrand.real, x=times, axis=0) + 1j * simpson(integrand.imag, x=times, axis=0)


def accumulate_F(model, chi_index, t, method=EXACT, samples=None) -> FOperator:
    """
    F(chi_k, t) = integral over [0, t] of U_S^dagger Pi_k U_S.

    ``samples`` sets the number of Simpson intervals for the quadrature
    method; it defaults to :func:`default_quadrature_samples`.
    """
    t = require_time(t)
    if method not in METHODS:
        raise UnknownMethod(f"got {method!r}", field='method')
    projector = model.projector(chi_index)
    if t == 0:
        matrix = np.zeros((model.dim, model.dim), dtype=complex)
    elif method == EXACT:
        matrix = _exact_F(model, projector, t)
    else:
        samples = samples or default_quadrature_samples(model, t)
        matrix = _quadrature_F(model, projector, t, samples + samples % 2)
    matrix = (matrix + matrix.conj().T) / 2
    return FOperator(
        chi_value=model.observable.values[chi_index],
        chi_index=chi_index,
        t=t,
        matrix=Operator(matrix, hermitian_hint=True),
        method=method,
    )
