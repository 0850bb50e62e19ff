"""
Exact system and pointer evolution with H = H_S + gamma q Pi_k.

The generator is diagonal in q, so every grid point evolves on its own with
exp(-i (H_S + gamma q_j Pi_k) t). Times are read off the pointer momentum
shift, tau = -(<p>(t) - <p>(0)) / gamma, with or without postselection.
"""
import logging

import numpy as np

from WeakTime.conf import get_setting
from WeakTime.parallel import parallel_map
from qcore.exceptions import DimMismatch
from qcore.linalg import ensemble, evolve_unitary
from qcore.models import Operator
from timefunc.exceptions import VanishingPostselection
from timefunc.operators import require_time
from .detector import apply_momentum, detector_moments
from .exceptions import MixedStateUnsupported, ZeroCoupling
from .models import CompositeEnsemble, CompositeState, DetectorState

logger = logging.getLogger(__name__)


def _coupling_operator(model, chi_index, coupling):
    if coupling is None:
        return model.projector(chi_index)
    if not isinstance(coupling, Operator):
        coupling = Operator(coupling, hermitian_hint=True)
    if coupling.dim != model.dim:
        raise DimMismatch(f"coupling has dimension {coupling.dim}, system has {model.dim}", field='coupling')
    return coupling


def evolve_composite(model, det: DetectorState, chi_index, t, coupling=None, state=None, n_jobs=None):
    """
    Evolve Phi(q) psi_0 for time t with the pointer coupled to Pi_k.

    ``state`` replaces the model's initial state and must be pure;
    ``coupling`` replaces Pi_k (any Hermitian operator).
    """
    t = require_time(t)
    state = state or model.initial
    if not state.is_pure:
        raise MixedStateUnsupported(field='initial')
    psi0 = state.vector
    generator = _coupling_operator(model, chi_index, coupling).matrix * det.gamma
    H = model.hamiltonian.matrix

    def propagate(q):
        shifted = Operator(H + q * generator, hermitian_hint=True)
        return evolve_unitary(shifted, t).matrix @ psi0

    if t == 0:
        vectors = np.tile(psi0, (det.N, 1))
    else:
        vectors = np.array(parallel_map(propagate, det.grid, n_jobs=n_jobs))
    composite = CompositeState(
        detector=det,
        spinors=det.amplitudes[:, None] * vectors,
        chi_index=chi_index,
        t=t,
    )
    logger.debug(f"Composite evolved to t={t} with gamma={det.gamma}: norm drift {abs(composite.norm() - 1):.2e}")
    return composite


def evolve_ensemble(model, det: DetectorState, chi_index, t, coupling=None, n_jobs=None):
    """Run one composite per eigen-ensemble member of the initial state."""
    weights, members = ensemble(model.initial)
    runs = tuple(
        evolve_composite(model, det, chi_index, t, coupling=coupling, state=member, n_jobs=n_jobs)
        for member in members
    )
    return CompositeEnsemble(weights=weights, members=runs)


def _members(composite):
    if isinstance(composite, CompositeEnsemble):
        return zip(composite.weights, composite.members)
    return [(1.0, composite)]


def _weight_and_momentum(spinors, det):
    """(sum_j |psi_j|^2 dq, sum_j Re <psi_j | p psi_j> dq), unnormalised."""
    weight = float(np.sum(np.abs(spinors) ** 2) * det.dq)
    momentum = float(np.sum(np.conj(spinors) * apply_momentum(spinors, det.momenta)).real * det.dq)
    return weight, momentum


def mean_momentum(composite):
    """<p_q> over the whole composite, summed over the system components."""
    total = 0.0
    for weight, member in _members(composite):
        _, momentum = _weight_and_momentum(member.spinors, member.detector)
        total += weight * momentum
    return total


def postselect(composite, model, final_label, p_min=None):
    """
    Project every psi_j on the final subspace.

    Returns the postselection probability and the pointer momentum averaged
    over the postselected runs only.
    """
    p_min = get_setting('P_MIN', p_min)
    projector = model.final_projector(final_label).matrix
    probability, momentum = 0.0, 0.0
    for weight, member in _members(composite):
        kept = member.spinors @ projector.T
        member_probability, member_momentum = _weight_and_momentum(kept, member.detector)
        probability += weight * member_probability
        momentum += weight * member_momentum
    if probability < p_min:
        raise VanishingPostselection(
            f"postselection probability {probability:.3e} < p_min = {p_min:.1e} for final {final_label!r}",
            field='final_label',
            probability=probability,
        )
    return probability, momentum / probability


def extract_time(delta_p, gamma):
    """tau = -delta_p / gamma."""
    if not gamma > 0:
        raise ZeroCoupling(f"got gamma={gamma}", field='gamma')
    return -delta_p / gamma


def oracle_time(model, det: DetectorState, chi_index, t, final_label=None, p_min=None, n_jobs=None):
    """
    Time read by the simulated pointer: unconditional when ``final_label`` is
    None, postselected on that final otherwise.
    """
    if model.initial.is_pure:
        composite = evolve_composite(model, det, chi_index, t, n_jobs=n_jobs)
    else:
        composite = evolve_ensemble(model, det, chi_index, t, n_jobs=n_jobs)
    reference = detector_moments(det).mean_p
    if final_label is None:
        momentum = mean_momentum(composite)
    else:
        _, momentum = postselect(composite, model, final_label, p_min=p_min)
    return extract_time(momentum - reference, det.gamma)
