"""
Closed-form times for the driven two-level system started in |0>.

Notation: c = omega / Omega, S = sin(Omega t / 2), C = cos(Omega t / 2),
and W = (1 + c^2) + (1 - c^2) cos(Omega t), so that the level-0 population
is p0 = W / 2 and the level-1 population is p1 = (1 - c^2) S^2.

The commutator components returned by :func:`conditional_closed` follow from
the general Im <P_f(t) F> / p_f. The companion expressions as they are
usually quoted differ from these (see :func:`printed_tau2`).
"""
import math

from WeakTime.conf import get_setting
from model.exceptions import UnknownFinal
from timefunc.operators import require_time
from .exceptions import SingularPostselection
from .models import ConditionalClosed, TwoLevelParams


def _level(level):
    level = str(level)
    if level not in ('0', '1'):
        raise UnknownFinal(f"level must be 0 or 1, got {level!r}", field='final')
    return level


def rabi_probability(params: TwoLevelParams, t, level):
    """Population of ``level`` at time t."""
    t = require_time(t)
    if params.Omega == 0:
        p1 = 0.0
    else:
        p1 = (1 - params.mixing) * math.sin(params.Omega * t / 2) ** 2
    return p1 if _level(level) == '1' else 1.0 - p1


def dwell_closed(params: TwoLevelParams, t):
    """(tau0, tau1): time spent in each level up to t. At Omega = 0 this is the limit (t, 0)."""
    t = require_time(t)
    if params.Omega == 0:
        return t, 0.0
    Omega, mixing = params.Omega, params.mixing
    oscillation = math.sin(Omega * t) * (1 - mixing) / (2 * Omega)
    tau0 = 0.5 * (1 + mixing) * t + oscillation
    return tau0, t - tau0


def _check_population(probability, final, t):
    p_min = get_setting('P_MIN')
    if probability < p_min:
        raise SingularPostselection(f"level {final} population {probability:.3e} < {p_min:.1e} at t = {t}",
                                    field='final')


def conditional_closed(params: TwoLevelParams, t, final) -> ConditionalClosed:
    """
    Conditional times for postselection on level ``final``.

    Returns tau1 and tau2 of level 0 and tau1 of level 1; the tau1 pair sums
    to t. Raises SingularPostselection where the final level is empty.
    """
    t = require_time(t)
    final = _level(final)
    _check_population(rabi_probability(params, t, final), final, t)
    if params.Omega == 0:
        # only reachable for final '0': nothing moves
        return ConditionalClosed(t, 0.0, 0.0)

    Omega, c = params.Omega, params.ratio
    mixing = c ** 2
    S, C = math.sin(Omega * t / 2), math.cos(Omega * t / 2)

    if final == '1':
        return ConditionalClosed(
            tau1_of_0=t / 2,
            tau2_of_0=(c / 2) * (2 / Omega - t * C / S),
            tau1_of_1=t / 2,
        )

    W = (1 + mixing) + (1 - mixing) * math.cos(Omega * t)
    tau1_of_0 = ((1 + 3 * mixing) * t
                 + (1 - mixing) * (2 / Omega * math.sin(Omega * t) + t * math.cos(Omega * t))) / (2 * W)
    tau1_of_1 = (1 - mixing) * (t + t * math.cos(Omega * t) - 2 / Omega * math.sin(Omega * t)) / (2 * W)
    tau2_of_0 = c * (1 - mixing) * S * (t * C - 2 / Omega * S) / W
    return ConditionalClosed(tau1_of_0, tau2_of_0, tau1_of_1)


def printed_tau2(params: TwoLevelParams, t, final):
    """
    tau2 of level 0 in the commonly quoted form.

    For final '0' this is half of the value from :func:`conditional_closed`;
    for final '1' it reads (omega / 2 Omega)(1 - t cot(Omega t / 2)), where
    the derived value has 2 / Omega in place of the 1.
    """
    t = require_time(t)
    final = _level(final)
    c = params.ratio
    Omega, mixing = params.Omega, c ** 2
    S, C = math.sin(Omega * t / 2), math.cos(Omega * t / 2)
    if final == '1':
        if S == 0:
            raise SingularPostselection(f"cot(Omega t / 2) is infinite at t = {t}", field='final')
        return (c / 2) * (1 - t * C / S)
    _check_population(rabi_probability(params, t, final), final, t)
    W = (1 + mixing) + (1 - mixing) * math.cos(Omega * t)
    return c * (1 - mixing) * S * (t * C - 2 / Omega * S) / (2 * W)
