"""
The operations behind ``manage.py weaktime``; each returns a TimeSeries (or
a CheckReport) and leaves writing to the caller.
"""
import logging
from dataclasses import dataclass

from WeakTime.conf import get_setting
from WeakTime.parallel import parallel_map
from oracle.convergence import convergence_study
from timefunc.exceptions import VanishingPostselection
from timefunc.models import EXACT, QUADRATURE
from timefunc.operators import accumulate_F
from timefunc.times import conditional_components, definiteness_check, dwell_time, presence_probability
from .exceptions import ScenarioValidationError, UsageFailure
from .figures import PRESETS, build_figure
from .scenario import Scenario
from .series import SENTINEL, TimeSeries

logger = logging.getLogger(__name__)

DEFINITE = 'DEFINITE'
INDEFINITE = 'INDEFINITE'


def _method(scenario):
    if scenario.tolerances.quadrature_N:
        return QUADRATURE, scenario.tolerances.quadrature_N
    return EXACT, None


def cmd_dwell(scenario: Scenario) -> TimeSeries:
    """Columns t, tau<k> for every observable index k, then presence<k>."""
    model = scenario.model
    method, samples = _method(scenario)
    indices = list(model.chi_indices)

    def row(t):
        taus = [dwell_time(model, k, t, F=accumulate_F(model, k, t, method=method, samples=samples))
                for k in indices]
        presences = [presence_probability(model, k, t) for k in indices]
        return (float(t), *taus, *presences)

    series = TimeSeries(header=('t', *[f'tau{k}' for k in indices], *[f'presence{k}' for k in indices]))
    for values in parallel_map(row, scenario.time.times()):
        series.append(values)
    return series


def cmd_conditional(scenario: Scenario, final_label) -> TimeSeries:
    """
    Columns t, prob_f, then tau1_<k>, tau2_<k>, tau_<k> and norm_<k> per observable index.

    tau_<k> uses the scenario detector's coefficient (0 without a detector).
    Rows where the final is unpopulated keep t and prob_f and leave the rest empty.
    """
    model = scenario.model
    model.final_projector(final_label)
    method, samples = _method(scenario)
    coeff = scenario.detector_coeff()
    p_min = scenario.tolerances.p_min
    threshold = scenario.tolerances.definiteness_threshold
    indices = list(model.chi_indices)
    width = 4 * len(indices)

    def row(t):
        values = []
        for k in indices:
            F = accumulate_F(model, k, t, method=method, samples=samples)
            try:
                result = conditional_components(model, k, final_label, t, p_min=p_min, threshold=threshold, F=F)
            except VanishingPostselection as exc:
                return (float(t), exc.probability, *[SENTINEL] * width)
            values.extend((result.tau1, result.tau2, result.combined(coeff), result.commutator_norm))
        return (float(t), result.prob_f, *values)

    header = ['t', 'prob_f']
    for k in indices:
        header.extend((f'tau1_{k}', f'tau2_{k}', f'tau_{k}', f'norm_{k}'))
    series = TimeSeries(header=tuple(header))
    for values in parallel_map(row, scenario.time.times()):
        series.append(values)
    skipped = sum(1 for values in series.rows if values[2] is SENTINEL)
    if skipped:
        logger.warning(f"{skipped} of {len(series.rows)} rows left empty: final {final_label!r} unpopulated")
    return series


@dataclass(frozen=True)
class CheckReport:
    chi_index: int
    final_label: str
    t: float
    commutator_norm: float
    threshold: float
    definite: bool

    @property
    def verdict(self):
        return DEFINITE if self.definite else INDEFINITE

    def line(self):
        return (f"chi={self.chi_index} final={self.final_label} t={self.t:.17g} "
                f"commutator_norm={self.commutator_norm:.17g} threshold={self.threshold:.17g} {self.verdict}")


def cmd_check(scenario: Scenario, chi_index, final_label, t) -> CheckReport:
    threshold = get_setting('DEFINITENESS_THRESHOLD', scenario.tolerances.definiteness_threshold)
    norm, definite = definiteness_check(scenario.model, chi_index, final_label, t, threshold=threshold)
    return CheckReport(
        chi_index=chi_index,
        final_label=str(final_label),
        t=float(t),
        commutator_norm=norm,
        threshold=threshold,
        definite=definite,
    )


def default_gammas(gamma):
    """gamma, gamma/2, gamma/4, gamma/8."""
    return [gamma / 2 ** n for n in range(4)]


def cmd_oracle(scenario: Scenario, final_label=None, gammas=None, chi_index=0, t=None) -> TimeSeries:
    """
    Convergence of the simulated pointer towards the first-order times.

    ``t`` defaults to the scenario's t_max and ``gammas`` to the halving
    sequence from the detector's own gamma.
    """
    if scenario.detector is None:
        raise ScenarioValidationError("the oracle needs a detector block", field='detector')
    if gammas is None:
        gammas = default_gammas(scenario.detector.gamma)
    t = scenario.time.t_max if t is None else t
    table = convergence_study(
        scenario.model,
        chi_index,
        final_label,
        t,
        gammas,
        scenario.detector.build(),
        p_min=scenario.tolerances.p_min,
    )
    series = TimeSeries(header=('gamma', 'tau_oracle', 'tau_formula', 'abs_error'))
    for row in table.rows:
        series.append((row.gamma, row.tau_oracle, row.tau_formula, row.error))
    logger.info(f"Oracle sweep over {len(table.rows)} couplings: final error {table.final_error:.3e}, "
                f"observed order {table.observed_order():.3f}")
    return series


def cmd_figures(preset) -> TimeSeries:
    if preset not in PRESETS:
        raise UsageFailure(f"unknown preset {preset!r}; expected one of {list(PRESETS)}", field='preset')
    return build_figure(preset)
