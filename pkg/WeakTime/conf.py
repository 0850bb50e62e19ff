from django.conf import settings

DEFAULTS = {
    'P_MIN': 1e-10,
    'DEFINITENESS_THRESHOLD': 1e-9,
    'HERMITIAN_TOL': 1e-10,
    'PROJECTOR_TOL': 1e-9,
    'STATE_TOL': 1e-10,
    'IMAG_RESIDUE_TOL': 1e-10,
    'QUADRATURE_MIN_SAMPLES': 200,
    'QUADRATURE_POINTS_PER_PERIOD': 20,
    'THREADS': 1,
    'DETECTOR': {'Q': 16.0, 'N': 512, 'SIGMA': 1.0},
    'FIGURE_T_MAX': 10.0,
    'FIGURE_SAMPLES': 1000,
    'CSV_SIGNIFICANT_DIGITS': 17,
}


def get_setting(name, override=None):
    """
    Resolve a WeakTime setting.

    An explicit ``override`` wins, then ``settings.WEAKTIME[name]``, then the
    built-in default.
    """
    if override is not None:
        return override
    configured = getattr(settings, 'WEAKTIME', {}) if settings.configured else {}
    if name in configured:
        return configured[name]
    return DEFAULTS[name]
