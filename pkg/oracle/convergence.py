import logging

from WeakTime.parallel import parallel_map
from timefunc.times import conditional_time, dwell_time
from .composite import oracle_time
from .detector import detector_moments
from .exceptions import InvalidSweep
from .models import ConvergenceRow, ConvergenceTable, DetectorState

logger = logging.getLogger(__name__)


def _check_gammas(gammas):
    try:
        gammas = [float(gamma) for gamma in gammas]
    except (TypeError, ValueError) as exc:
        raise InvalidSweep(str(exc), field='gammas') from exc
    if not gammas:
        raise InvalidSweep("no couplings given", field='gammas')
    if any(not gamma > 0 for gamma in gammas):
        raise InvalidSweep(f"couplings must be positive, got {gammas}", field='gammas')
    if any(later >= earlier for earlier, later in zip(gammas, gammas[1:])):
        raise InvalidSweep(f"couplings must be strictly descending, got {gammas}", field='gammas')
    return gammas


def convergence_study(model, chi_index, final_label, t, gammas, detector: DetectorState, p_min=None, n_jobs=None):
    """
    Oracle time against the first-order formula for a descending list of couplings.

    The formula is the dwell time when ``final_label`` is None and
    tau1 + c tau2 with the detector's own coefficient c otherwise.
    ``detector`` is a template; its gamma is replaced by each sweep value.
    """
    gammas = _check_gammas(gammas)
    coeff = detector_moments(detector).coeff_c
    if final_label is None:
        formula = dwell_time(model, chi_index, t)
    else:
        formula = conditional_time(model, chi_index, final_label, t, coeff, p_min=p_min)

    def run(gamma):
        return oracle_time(model, detector.with_gamma(gamma), chi_index, t,
                           final_label=final_label, p_min=p_min, n_jobs=1)

    rows = []
    for gamma, tau in zip(gammas, parallel_map(run, gammas, n_jobs=n_jobs)):
        row = ConvergenceRow(gamma=gamma, tau_oracle=tau, tau_formula=formula, error=abs(tau - formula))
        logger.debug(f"gamma={gamma:.3e} tau_oracle={tau:.12g} tau_formula={formula:.12g} error={row.error:.3e}")
        rows.append(row)
    return ConvergenceTable(
        rows=tuple(rows),
        chi_index=chi_index,
        final_label=final_label,
        t=float(t),
        detector_coeff=coeff,
    )
