import math

import numpy as np
from django.test import SimpleTestCase

from timefunc.times import conditional_components, dwell_time, presence_probability
from .closed_forms import conditional_closed, dwell_closed, printed_tau2, rabi_probability
from .exceptions import InvalidParameters, SingularPostselection, ZeroFrequency
from .models import TwoLevelParams
from .systems import build_two_level

RABI = TwoLevelParams.from_frequencies(2.0, 4.0)
T_GRID = np.linspace(0.0, 10.0, 1000)


def away_from_empty_level(t, Omega=4.0, radius=0.01):
    phase = math.remainder(Omega * t, 2 * math.pi)
    return abs(phase) >= radius


class TwoLevelParamsTestCase(SimpleTestCase):
    def test_rabi_frequency(self):
        self.assertAlmostEqual(TwoLevelParams(2.0, math.sqrt(3.0)).Omega, 4.0, delta=1e-12)
        self.assertAlmostEqual(RABI.Omega, 4.0, delta=1e-12)
        self.assertAlmostEqual(abs(RABI.v), math.sqrt(3.0), delta=1e-12)

    def test_complex_coupling_enters_through_modulus(self):
        params = TwoLevelParams(2.0, math.sqrt(3.0) * np.exp(0.7j))
        self.assertAlmostEqual(params.Omega, 4.0, delta=1e-12)
        np.testing.assert_allclose(dwell_closed(params, 1.3), dwell_closed(RABI, 1.3), atol=1e-12)

    def test_omega_not_below_splitting(self):
        with self.assertRaises(InvalidParameters):
            TwoLevelParams.from_frequencies(2.0, 1.0)
        with self.assertRaises(InvalidParameters):
            TwoLevelParams(float('inf'), 0)

    def test_zero_frequency(self):
        with self.assertRaises(ZeroFrequency):
            TwoLevelParams(0.0, 0.0).mixing


class BuildTwoLevelTestCase(SimpleTestCase):
    def test_figure_parameters(self):
        model = build_two_level(2.0, math.sqrt(3.0))
        np.testing.assert_allclose(model.spectrum.eigenvalues, [-2, 2], atol=1e-12)
        self.assertTrue(model.finals.complete)
        np.testing.assert_allclose(model.initial.vector, [1, 0])

    def test_zero_hamiltonian(self):
        model = build_two_level(0.0, 0.0)
        np.testing.assert_array_equal(model.hamiltonian.matrix, np.zeros((2, 2)))
        self.assertEqual(TwoLevelParams(0.0, 0.0).Omega, 0.0)

    def test_uncoupled(self):
        self.assertEqual(TwoLevelParams(2.0, 0.0).Omega, 2.0)
        np.testing.assert_allclose(build_two_level(2.0).spectrum.eigenvalues, [-1, 1])

    def test_accepts_params(self):
        model = build_two_level(RABI)
        np.testing.assert_allclose(model.spectrum.eigenvalues, [-2, 2], atol=1e-12)


class DwellClosedTestCase(SimpleTestCase):
    def test_levels_sum_to_t(self):
        for t in (0.0, 0.3, 2.0, 7.7):
            tau0, tau1 = dwell_closed(RABI, t)
            self.assertAlmostEqual(tau0 + tau1, t, delta=1e-15)

    def test_quarter_period(self):
        tau0, _ = dwell_closed(RABI, math.pi / 2)
        self.assertAlmostEqual(tau0, 0.625 * math.pi / 2, delta=1e-12)
        self.assertAlmostEqual(tau0, 0.98175, delta=1e-5)

    def test_uncoupled(self):
        self.assertEqual(dwell_closed(TwoLevelParams(2.0, 0.0), 3.0), (3.0, 0.0))

    def test_zero_frequency_limit(self):
        self.assertEqual(dwell_closed(TwoLevelParams(0.0, 0.0), 1.5), (1.5, 0.0))

    def test_matches_general_dwell_time(self):
        model = build_two_level(RABI)
        deviation = max(
            max(abs(dwell_time(model, 0, t) - tau0), abs(dwell_time(model, 1, t) - tau1))
            for t, (tau0, tau1) in ((t, dwell_closed(RABI, t)) for t in T_GRID)
        )
        self.assertLessEqual(deviation, 1e-9)


class RabiProbabilityTestCase(SimpleTestCase):
    def test_initial(self):
        self.assertEqual(rabi_probability(RABI, 0.0, 0), 1.0)
        self.assertEqual(rabi_probability(RABI, 0.0, 1), 0.0)

    def test_uncoupled(self):
        for t in (0.5, 5.0):
            self.assertAlmostEqual(rabi_probability(TwoLevelParams(2.0, 0.0), t, 1), 0.0, delta=1e-15)

    def test_derivative_of_level_one_dwell(self):
        h = 1e-5
        for t in (0.4, 1.1, 3.0):
            derivative = (dwell_closed(RABI, t + h)[1] - dwell_closed(RABI, t - h)[1]) / (2 * h)
            self.assertAlmostEqual(rabi_probability(RABI, t, 1), 0.75 * math.sin(2 * t) ** 2, delta=1e-12)
            self.assertAlmostEqual(rabi_probability(RABI, t, 1), derivative, delta=1e-8)

    def test_matches_presence_probability(self):
        model = build_two_level(RABI)
        for t in T_GRID[::50]:
            self.assertAlmostEqual(rabi_probability(RABI, t, 0), presence_probability(model, 0, t), delta=1e-12)


class ConditionalClosedTestCase(SimpleTestCase):
    def test_level_one_final_halves_time(self):
        for t in (0.2, 1.0, 2.5):
            self.assertEqual(conditional_closed(RABI, t, 1).tau1_of_0, t / 2)

    def test_uncoupled_level_zero_final(self):
        result = conditional_closed(TwoLevelParams(2.0, 0.0), 1.7, 0)
        self.assertAlmostEqual(result.tau1_of_0, 1.7, delta=1e-15)
        self.assertAlmostEqual(result.tau2_of_0, 0.0, delta=1e-15)
        self.assertAlmostEqual(result.tau1_of_1, 0.0, delta=1e-15)

    def test_level_zero_final_at_unit_time(self):
        model = build_two_level(RABI)
        closed = conditional_closed(RABI, 1.0, '0')
        self.assertAlmostEqual(closed.tau1_of_0, conditional_components(model, 0, '0', 1.0).tau1, delta=1e-9)
        self.assertAlmostEqual(closed.tau2_of_0, conditional_components(model, 0, '0', 1.0).tau2, delta=1e-9)
        self.assertAlmostEqual(closed.tau1_of_1, conditional_components(model, 1, '0', 1.0).tau1, delta=1e-9)

    def test_matches_general_components_on_grid(self):
        model = build_two_level(RABI)
        for t in T_GRID[1:]:
            for final in ('0', '1'):
                if final == '1' and not away_from_empty_level(t):
                    continue
                closed = conditional_closed(RABI, t, final)
                level0 = conditional_components(model, 0, final, t)
                level1 = conditional_components(model, 1, final, t)
                self.assertAlmostEqual(closed.tau1_of_0, level0.tau1, delta=1e-9)
                self.assertAlmostEqual(closed.tau2_of_0, level0.tau2, delta=1e-9 * max(1.0, abs(level0.tau2)))
                self.assertAlmostEqual(closed.tau1_of_1, level1.tau1, delta=1e-9)

    def test_weighted_reconstruction(self):
        for t in T_GRID[1:]:
            if not away_from_empty_level(t):
                continue
            p0, p1 = rabi_probability(RABI, t, 0), rabi_probability(RABI, t, 1)
            given0, given1 = conditional_closed(RABI, t, 0), conditional_closed(RABI, t, 1)
            tau0, _ = dwell_closed(RABI, t)
            self.assertAlmostEqual(p0 * given0.tau1_of_0 + p1 * given1.tau1_of_0, tau0, delta=1e-9)
            self.assertAlmostEqual(p0 * given0.tau2_of_0 + p1 * given1.tau2_of_0, 0.0, delta=1e-9)

    def test_empty_level(self):
        with self.assertRaises(SingularPostselection):
            conditional_closed(RABI, math.pi / 2, 1)
        with self.assertRaises(SingularPostselection):
            conditional_closed(TwoLevelParams(2.0, 0.0), 1.0, 1)

    def test_resonant_level_zero_empties(self):
        # omega = 0, Omega t = pi: the system sits in level 1
        with self.assertRaises(SingularPostselection):
            conditional_closed(TwoLevelParams(0.0, 1.0), math.pi / 2, 0)

    def test_divergence_near_empty_level(self):
        offsets = np.logspace(-2, -3, 12)
        magnitudes = [abs(conditional_closed(RABI, math.pi / 2 - delta, 1).tau2_of_0) for delta in offsets]
        self.assertTrue(np.all(np.diff(magnitudes) > 0))


class PrintedTau2TestCase(SimpleTestCase):
    def test_level_zero_final_is_half(self):
        for t in (0.3, 1.0, 4.2):
            self.assertAlmostEqual(conditional_closed(RABI, t, 0).tau2_of_0, 2 * printed_tau2(RABI, t, 0), delta=1e-12)

    def test_level_one_final_differs_by_constant(self):
        # (omega / 2 Omega)(2 / Omega - 1) = 0.25 * (0.5 - 1)
        for t in (0.3, 1.0, 4.2):
            gap = conditional_closed(RABI, t, 1).tau2_of_0 - printed_tau2(RABI, t, 1)
            self.assertAlmostEqual(gap, -0.125, delta=1e-12)

    def test_singular_cot(self):
        with self.assertRaises(SingularPostselection):
            printed_tau2(RABI, 0.0, 1)

    def test_zero_frequency(self):
        with self.assertRaises(ZeroFrequency):
            printed_tau2(TwoLevelParams(0.0, 0.0), 1.0, 0)
