"""
Gaussian pointer states on a periodic coordinate grid and their moments.

Momentum acts spectrally: transform, multiply by the angular wavenumber,
transform back. The boundary-decay check keeps the periodic wrap harmless.
"""
import logging
import math

import numpy as np
from scipy import fft

from WeakTime.conf import get_setting
from .exceptions import GridTooSmall, InvalidDetector, ZeroCoupling
from .models import DetectorMoments, DetectorState

logger = logging.getLogger(__name__)

BOUNDARY_DECAY = 1e-12
MIN_HALF_WIDTH = 8.0


def apply_momentum(amplitudes, momenta):
    """p = -i d/dq applied along axis 0."""
    if amplitudes.ndim == 1:
        return fft.ifft(momenta * fft.fft(amplitudes))
    return fft.ifft(momenta[:, None] * fft.fft(amplitudes, axis=0), axis=0)


def make_detector(Q=None, N=None, sigma=None, chirp=0.0, q0=0.0, p0=0.0, gamma=None) -> DetectorState:
    """
    Phi(q) ~ exp(-(1 + i chirp)(q - q0)^2 / (4 sigma^2) + i p0 q), normalised on the grid.

    Q, N and sigma default to ``WEAKTIME['DETECTOR']``.
    """
    defaults = get_setting('DETECTOR')
    Q = float(defaults['Q'] if Q is None else Q)
    N = int(defaults['N'] if N is None else N)
    sigma = float(defaults['SIGMA'] if sigma is None else sigma)
    chirp, q0, p0 = float(chirp), float(q0), float(p0)

    if N < 2 or N & (N - 1):
        raise InvalidDetector(f"N must be a power of two, got {N}", field='detector.N')
    if not sigma > 0:
        raise InvalidDetector(f"sigma must be positive, got {sigma}", field='detector.sigma')
    if gamma is None or not gamma > 0:
        raise ZeroCoupling(f"got gamma={gamma}", field='detector.gamma')
    if Q < MIN_HALF_WIDTH * sigma:
        raise GridTooSmall(f"Q={Q} is below {MIN_HALF_WIDTH:g} sigma = {MIN_HALF_WIDTH * sigma:g}", field='detector.Q')
    # |Phi|^2 relative to its peak at q0, at both ends of the grid
    edge = min(abs(Q - q0), abs(-Q - q0))
    if abs(q0) >= Q or math.exp(-edge ** 2 / (2 * sigma ** 2)) > BOUNDARY_DECAY:
        raise GridTooSmall(f"|Phi(+-Q)|^2 exceeds {BOUNDARY_DECAY:.0e} of the peak for q0={q0}", field='detector.q0')

    dq = 2 * Q / N
    grid = -Q + dq * np.arange(N)
    shifted = grid - q0
    amplitudes = np.exp(-(1 + 1j * chirp) * shifted ** 2 / (4 * sigma ** 2) + 1j * p0 * grid)
    amplitudes /= math.sqrt(np.sum(np.abs(amplitudes) ** 2) * dq)
    grid.setflags(write=False)
    amplitudes.setflags(write=False)
    logger.debug(f"Pointer on {N} points, dq={dq:.4g}, sigma={sigma}, chirp={chirp}, q0={q0}, p0={p0}")
    return DetectorState(
        grid=grid,
        amplitudes=amplitudes,
        gamma=float(gamma),
        sigma=sigma,
        chirp=chirp,
        q0=q0,
        p0=p0,
    )


def detector_moments(d: DetectorState) -> DetectorMoments:
    """<q> by grid quadrature; <p> and Re<q p> through the spectral momentum."""
    phi = d.amplitudes
    p_phi = apply_momentum(phi, d.momenta)
    mean_q = float(np.sum(d.grid * np.abs(phi) ** 2) * d.dq)
    mean_p = float(np.vdot(phi, p_phi).real * d.dq)
    # Re<q p> = <(q p + p q) / 2>
    re_qp = float(np.vdot(d.grid * phi, p_phi).real * d.dq)
    return DetectorMoments(
        mean_q=mean_q,
        mean_p=mean_p,
        re_qp=re_qp,
        coeff_c=2 * (mean_q * mean_p - re_qp),
    )


def gaussian_moments(chirp=0.0, q0=0.0, p0=0.0) -> DetectorMoments:
    """Continuum moments of the chirped Gaussian pointer, for any width; c equals the chirp."""
    re_qp = q0 * p0 - chirp / 2
    return DetectorMoments(mean_q=q0, mean_p=p0, re_qp=re_qp, coeff_c=2 * (q0 * p0 - re_qp))
