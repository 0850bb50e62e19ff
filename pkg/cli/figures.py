"""
Two-level figure data from the closed forms (omega = 2, Omega = 4).

fig1: dwell times of both levels and the symmetric conditional times.
fig2: the commutator part of the level-0 time for final level 0, as derived
and in its commonly quoted form.
"""
import logging

import numpy as np

from WeakTime.conf import get_setting
from twolevel.closed_forms import conditional_closed, dwell_closed, printed_tau2
from twolevel.exceptions import SingularPostselection
from twolevel.models import TwoLevelParams
from .series import SENTINEL, TimeSeries

logger = logging.getLogger(__name__)

FIGURE_OMEGA = 2.0
FIGURE_RABI = 4.0

FIG1_HEADER = ('t', 'tau0', 'tau1', 'tau1_1_of_0', 'tau0_1_of_0', 'tau0_1_of_1')
FIG2_HEADER = ('t', 'tau0_2_of_0', 'tau0_2_of_0_printed')
PRESETS = ('fig1', 'fig2')


def figure_params():
    return TwoLevelParams.from_frequencies(FIGURE_OMEGA, FIGURE_RABI)


def figure_times(t_max=None, samples=None):
    t_max = get_setting('FIGURE_T_MAX', t_max)
    samples = get_setting('FIGURE_SAMPLES', samples)
    return np.linspace(0.0, t_max, samples)


def _tau1_given_level_1(params, t):
    try:
        return conditional_closed(params, t, '1').tau1_of_0
    except SingularPostselection:
        return SENTINEL


def fig1(params=None, times=None) -> TimeSeries:
    params = params or figure_params()
    times = figure_times() if times is None else times
    series = TimeSeries(header=FIG1_HEADER)
    for t in times:
        t = float(t)
        tau0, tau1 = dwell_closed(params, t)
        given_0 = conditional_closed(params, t, '0')
        series.append((t, tau0, tau1, _tau1_given_level_1(params, t), given_0.tau1_of_0, given_0.tau1_of_1))
    return series


def fig2(params=None, times=None) -> TimeSeries:
    params = params or figure_params()
    times = figure_times() if times is None else times
    series = TimeSeries(header=FIG2_HEADER)
    for t in times:
        t = float(t)
        series.append((t, conditional_closed(params, t, '0').tau2_of_0, printed_tau2(params, t, '0')))
    return series


def build_figure(preset) -> TimeSeries:
    builders = {'fig1': fig1, 'fig2': fig2}
    series = builders[preset]()
    logger.info(f"Built {preset} with {len(series.rows)} rows")
    return series
