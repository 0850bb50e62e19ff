"""
Dwell times and postselected conditional times built from F(chi, t).

With z = <P_f(t) F(chi, t)> in the initial state and p_f = <P_f(t)>,
tau1 = Re z / p_f is the symmetrised part and tau2 = Im z / p_f the
commutator part. A detector with coefficient c reads tau1 + c tau2.
"""
import logging

from WeakTime.conf import get_setting
from qcore.exceptions import NumericalFailure
from qcore.linalg import commutator, expectation, frob_norm
from model.exceptions import UnknownIndex
from .exceptions import ImaginaryResidue, IncompleteFinals, VanishingPostselection
from .models import EXACT, ConditionalResult, SumRuleReport
from .operators import accumulate_F, interaction_picture, require_time

logger = logging.getLogger(__name__)

# dwell times in (-CLAMP, 0) are rounding noise
CLAMP = 1e-9
NORM_EPSILON = 1e-30


def _real(value, name):
    value = complex(value)
    tolerance = get_setting('IMAG_RESIDUE_TOL') * (1 + abs(value))
    if abs(value.imag) > tolerance:
        raise ImaginaryResidue(f"imaginary part {value.imag:.3e} exceeds {tolerance:.3e}", field=name)
    return value.real


def presence_probability(model, chi_index, t):
    """P(chi_k, t) = <U_S^dagger Pi_k U_S>."""
    t = require_time(t)
    moved = interaction_picture(model, model.projector(chi_index), t)
    return _real(expectation(model.initial, moved), 'presence_probability')


def dwell_time(model, chi_index, t, method=EXACT, F=None):
    """tau(chi_k, t) = <F(chi_k, t)>, the time spent with chi = chi_k up to t."""
    F = F or accumulate_F(model, chi_index, t, method=method)
    value = _real(expectation(model.initial, F.matrix), 'dwell_time')
    if value < 0:
        if value < -CLAMP:
            raise NumericalFailure(f"dwell time {value:.3e} is negative", field='dwell_time')
        value = 0.0
    return value


def region_time(model, chi_indices, t, method=EXACT):
    """Time spent in the region Gamma of observable values: the sum of their dwell times."""
    region = sorted(set(chi_indices))
    if not region:
        raise UnknownIndex("region must name at least one observable index", field='chi_indices')
    for index in region:
        model.projector(index)
    return float(sum(dwell_time(model, index, t, method=method) for index in region))


def _commutator_norm(P, F):
    return frob_norm(commutator(P, F)) / (frob_norm(P) * frob_norm(F) + NORM_EPSILON)


def definiteness_check(model, chi_index, final_label, t, threshold=None):
    """
    Relative norm of [P_f(t), F(chi, t)] and whether it is below ``threshold``.

    A vanishing commutator means every detector reads the same conditional time.
    """
    threshold = get_setting('DEFINITENESS_THRESHOLD', threshold)
    F = accumulate_F(model, chi_index, t)
    P = interaction_picture(model, model.final_projector(final_label), F.t)
    norm = _commutator_norm(P, F.matrix)
    return norm, bool(norm <= threshold)


def conditional_components(model, chi_index, final_label, t, p_min=None, threshold=None, F=None):
    """
    tau1, tau2 and the postselection probability for final subspace ``final_label``.

    Raises VanishingPostselection when <P_f(t)> falls below ``p_min``; the
    conditional times diverge there.
    """
    p_min = get_setting('P_MIN', p_min)
    threshold = get_setting('DEFINITENESS_THRESHOLD', threshold)
    F = F or accumulate_F(model, chi_index, t)
    P = interaction_picture(model, model.final_projector(final_label), F.t)
    prob = _real(expectation(model.initial, P), 'prob_f')
    if prob < p_min:
        raise VanishingPostselection(
            f"<P_f(t)> = {prob:.3e} < p_min = {p_min:.1e} for final {final_label!r} at t = {F.t}",
            field='final_label',
            probability=prob,
        )
    symmetric = expectation(model.initial, P @ F.matrix + F.matrix @ P)
    skew = expectation(model.initial, commutator(P, F.matrix))
    tau1 = _real(symmetric, 'tau1') / (2 * prob)
    tau2 = _real(skew / 2j, 'tau2') / prob
    logger.debug(f"chi={chi_index} f={final_label} t={F.t}: p_f={prob:.6g} tau1={tau1:.6g} tau2={tau2:.6g}")
    norm = _commutator_norm(P, F.matrix)
    return ConditionalResult(
        tau1=tau1,
        tau2=tau2,
        prob_f=prob,
        commutator_norm=norm,
        definite=bool(norm <= threshold),
    )


def conditional_time(model, chi_index, final_label, t, detector_coeff, p_min=None):
    """tau1 + c tau2, the conditional time read by a detector with coefficient c."""
    result = conditional_components(model, chi_index, final_label, t, p_min=p_min)
    return result.combined(detector_coeff)


def sum_rule_report(model, t, p_min=None, skip_vanishing=False) -> SumRuleReport:
    """
    Check the averaging sum rules at time ``t``.

    For every chi: sum_f p_f tau1_f = tau and sum_f p_f tau2_f = 0.
    For every final: sum_chi tau1_f = t and sum_chi tau2_f = 0.

    With ``skip_vanishing`` a final below ``p_min`` is left out of every sum
    and listed in ``skipped`` instead of raising VanishingPostselection.
    """
    if not model.finals.complete:
        raise IncompleteFinals(field='finals.complete')
    t = require_time(t)
    F_by_chi = {k: accumulate_F(model, k, t) for k in model.chi_indices}
    components, skipped = {}, []
    for label in model.final_labels:
        try:
            for k in model.chi_indices:
                components[(k, label)] = conditional_components(model, k, label, t, p_min=p_min, F=F_by_chi[k])
        except VanishingPostselection:
            if not skip_vanishing:
                raise
            logger.warning(f"Final {label!r} is unpopulated at t={t}; left out of the sum rules")
            skipped.append(label)
    finals = [label for label in model.final_labels if label not in skipped]
    probabilities = {label: components[(0, label)].prob_f for label in finals}

    weighted_tau1, weighted_tau2 = {}, {}
    for k in model.chi_indices:
        tau = dwell_time(model, k, t, F=F_by_chi[k])
        weighted_tau1[k] = abs(sum(probabilities[f] * components[(k, f)].tau1 for f in finals) - tau)
        weighted_tau2[k] = abs(sum(probabilities[f] * components[(k, f)].tau2 for f in finals))

    completeness_tau1, completeness_tau2 = {}, {}
    for label in finals:
        completeness_tau1[label] = abs(sum(components[(k, label)].tau1 for k in model.chi_indices) - t)
        completeness_tau2[label] = abs(sum(components[(k, label)].tau2 for k in model.chi_indices))

    report = SumRuleReport(
        t=t,
        probabilities=probabilities,
        weighted_tau1=weighted_tau1,
        weighted_tau2=weighted_tau2,
        completeness_tau1=completeness_tau1,
        completeness_tau2=completeness_tau2,
        skipped=tuple(skipped),
    )
    logger.debug(f"Sum rules at t={t}: max residual {report.max_residual:.3e}")
    return report