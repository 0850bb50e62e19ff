import math

import numpy as np
from django.test import SimpleTestCase
from scipy.integrate import simpson

from model.exceptions import UnknownIndex
from model.testing import random_model
from model.validation import validate_system
from qcore.models import Operator
from twolevel.systems import LEVEL_0, LEVEL_1, build_two_level, two_level_hamiltonian
from twolevel.models import TwoLevelParams
from .exceptions import IncompleteFinals, NegativeTime, UnknownMethod, VanishingPostselection
from .operators import accumulate_F, default_quadrature_samples, interaction_picture, phase_integral
from .times import (
    conditional_components,
    conditional_time,
    definiteness_check,
    dwell_time,
    presence_probability,
    region_time,
    sum_rule_report,
)

ROOT3 = math.sqrt(3.0)


def rabi_model():
    return build_two_level(2.0, ROOT3)


def expected_tau0(t):
    return 0.625 * t + 0.09375 * math.sin(4 * t)


def expected_tau1_given_0(t, c2=0.25, Omega=4.0):
    W = (1 + c2) + (1 - c2) * math.cos(Omega * t)
    return ((1 + 3 * c2) * t + (1 - c2) * (2 / Omega * math.sin(Omega * t) + t * math.cos(Omega * t))) / (2 * W)


def identity_final_model():
    params = TwoLevelParams(2.0, ROOT3)
    return validate_system({
        'hamiltonian': two_level_hamiltonian(params),
        'initial': [1.0, 0.0],
        'observable': {'values': [0.0, 1.0], 'projectors': [LEVEL_0, LEVEL_1]},
        'finals': {'labels': ['any'], 'projectors': [np.eye(2)], 'complete': True},
    })


def three_level_model():
    rng = np.random.default_rng(21)
    return random_model(rng, 3, chi_parts=3, final_parts=3)


class InteractionPictureTestCase(SimpleTestCase):
    def test_zero_time(self):
        model = rabi_model()
        A = Operator(LEVEL_0, hermitian_hint=True)
        self.assertIs(interaction_picture(model, A, 0.0), A)

    def test_identity_is_invariant(self):
        model = rabi_model()
        for t in (0.3, 1.0, 7.5):
            moved = interaction_picture(model, Operator.identity(2), t)
            np.testing.assert_allclose(moved.matrix, np.eye(2), atol=1e-12)

    def test_trace_preserved(self):
        moved = interaction_picture(rabi_model(), Operator(LEVEL_0, hermitian_hint=True), math.pi / 4)
        self.assertAlmostEqual(np.trace(moved.matrix).real, 1.0, places=12)
        self.assertTrue(moved.hermitian_hint)


class PhaseIntegralTestCase(SimpleTestCase):
    def test_zero_frequency(self):
        self.assertEqual(phase_integral(0.0, 2.5), 2.5)

    def test_both_branches_near_the_guard(self):
        for omega in (0.9e-8, 1.1e-8):
            expected = complex(math.sin(omega), 2 * math.sin(omega / 2) ** 2) / omega
            self.assertLess(abs(phase_integral(omega, 1.0) - expected), 1e-15)

    def test_closed_form(self):
        omega, t = 3.0, 0.7
        expected = (np.exp(1j * omega * t) - 1) / (1j * omega)
        self.assertLess(abs(phase_integral(omega, t) - expected), 1e-15)


class AccumulateFTestCase(SimpleTestCase):
    def test_zero_time(self):
        F = accumulate_F(rabi_model(), 0, 0.0)
        np.testing.assert_array_equal(F.matrix.matrix, np.zeros((2, 2)))

    def test_commuting_projector(self):
        model = build_two_level(2.0, 0.0)
        for t in (0.5, 3.0):
            F = accumulate_F(model, 0, t)
            np.testing.assert_allclose(F.matrix.matrix, t * LEVEL_0, atol=1e-12)

    def test_diagonal_element_matches_level_zero_dwell(self):
        F = accumulate_F(rabi_model(), 0, 1.0)
        self.assertAlmostEqual(F.matrix.matrix[0, 0].real, expected_tau0(1.0), delta=1e-9)
        self.assertEqual(F.chi_value, 0.0)

    def test_negative_time(self):
        with self.assertRaises(NegativeTime):
            accumulate_F(rabi_model(), 0, -1.0)
        with self.assertRaises(NegativeTime):
            accumulate_F(rabi_model(), 0, float('nan'))

    def test_unknown_method(self):
        with self.assertRaises(UnknownMethod):
            accumulate_F(rabi_model(), 0, 1.0, method='euler')

    def test_sum_over_values_and_eigenvalue_bounds(self):
        rng = np.random.default_rng(31)
        for _ in range(100):
            dim = int(rng.integers(1, 9))
            model = random_model(rng, dim)
            t = float(rng.uniform(0, 6))
            total = np.zeros((dim, dim), dtype=complex)
            for k in model.chi_indices:
                F = accumulate_F(model, k, t)
                eigenvalues = F.eigenvalues()
                self.assertGreaterEqual(eigenvalues.min(), -1e-9)
                self.assertLessEqual(eigenvalues.max(), t + 1e-9)
                total += F.matrix.matrix
            self.assertLessEqual(np.linalg.norm(total - t * np.eye(dim)), 1e-9)


class QuadratureTestCase(SimpleTestCase):
    def test_default_sample_count(self):
        model = rabi_model()
        self.assertEqual(default_quadrature_samples(model, 0.1), 200)
        # ||H||_F = sqrt(2 * (1 + 3)) = 2 sqrt(2)
        self.assertEqual(default_quadrature_samples(model, 10.0), 566)

    def test_default_samples_on_two_level(self):
        model = rabi_model()
        exact = accumulate_F(model, 0, 1.0).matrix.matrix
        quad = accumulate_F(model, 0, 1.0, method='quadrature').matrix.matrix
        self.assertLessEqual(np.linalg.norm(exact - quad), 1e-7)

    def test_exact_matches_simpson_on_random_models(self):
        rng = np.random.default_rng(41)
        for _ in range(50):
            dim = int(rng.integers(1, 9))
            model = random_model(rng, dim)
            k = int(rng.integers(0, len(model.observable)))
            for t in (0.1, 1.0, 5.0):
                samples = math.ceil(t / 1e-3)
                exact = accumulate_F(model, k, t).matrix.matrix
                quad = accumulate_F(model, k, t, method='quadrature', samples=samples).matrix.matrix
                self.assertLessEqual(np.linalg.norm(exact - quad), 1e-8 * t)


class PresenceProbabilityTestCase(SimpleTestCase):
    def test_initial_level(self):
        model = rabi_model()
        self.assertAlmostEqual(presence_probability(model, 0, 0.0), 1.0)
        self.assertAlmostEqual(presence_probability(model, 1, 0.0), 0.0)

    def test_rabi_formula(self):
        model = rabi_model()
        for t in np.linspace(0, 3, 31):
            self.assertAlmostEqual(presence_probability(model, 1, t), 0.75 * math.sin(2 * t) ** 2, delta=1e-12)

    def test_probabilities_sum_to_one(self):
        model = random_model(np.random.default_rng(51), 5, chi_parts=4, mixed=True)
        total = sum(presence_probability(model, k, 1.7) for k in model.chi_indices)
        self.assertAlmostEqual(total, 1.0, delta=1e-9)


class DwellTimeTestCase(SimpleTestCase):
    def test_no_transitions(self):
        model = build_two_level(2.0, 0.0)
        self.assertAlmostEqual(dwell_time(model, 0, 2.5), 2.5, delta=1e-12)
        self.assertEqual(dwell_time(model, 1, 2.5), 0.0)

    def test_two_level_closed_form(self):
        model = rabi_model()
        for t in (0.25, 1.0, 3.3, 9.9):
            self.assertAlmostEqual(dwell_time(model, 0, t), expected_tau0(t), delta=1e-9)

    def test_values_sum_to_t_on_random_models(self):
        rng = np.random.default_rng(61)
        for trial in range(100):
            model = random_model(rng, int(rng.integers(1, 7)), mixed=bool(trial % 2))
            t = float(rng.uniform(0, 10))
            total = sum(dwell_time(model, k, t) for k in model.chi_indices)
            self.assertAlmostEqual(total, t, delta=1e-8)

    def test_monotone(self):
        model = random_model(np.random.default_rng(71), 4, chi_parts=3)
        values = [dwell_time(model, 1, t) for t in np.linspace(0, 5, 200)]
        self.assertGreaterEqual(values[0], 0.0)
        self.assertTrue(np.all(np.diff(values) >= -1e-12))

    def test_integral_of_presence_probability(self):
        model = random_model(np.random.default_rng(81), 3, chi_parts=2)
        times = np.linspace(0, 1.0, 1001)
        presence = [presence_probability(model, 0, t) for t in times]
        self.assertAlmostEqual(simpson(presence, x=times), dwell_time(model, 0, 1.0), delta=1e-7)


class RegionTimeTestCase(SimpleTestCase):
    def test_all_values(self):
        model = three_level_model()
        self.assertAlmostEqual(region_time(model, [0, 1, 2], 1.3), 1.3, delta=1e-9)

    def test_single_value(self):
        model = three_level_model()
        self.assertEqual(region_time(model, {0}, 1.3), dwell_time(model, 0, 1.3))

    def test_additivity(self):
        model = three_level_model()
        expected = dwell_time(model, 0, 2.0) + dwell_time(model, 1, 2.0)
        self.assertAlmostEqual(region_time(model, [1, 0], 2.0), expected, delta=1e-12)

    def test_errors(self):
        model = three_level_model()
        with self.assertRaises(UnknownIndex):
            region_time(model, [], 1.0)
        with self.assertRaises(UnknownIndex):
            region_time(model, [0, 3], 1.0)


class ConditionalComponentsTestCase(SimpleTestCase):
    def test_level_one_final_halves_time(self):
        model = rabi_model()
        for t in (0.1, 0.5, 1.0, 2.0, 4.0):
            result = conditional_components(model, 0, '1', t)
            self.assertAlmostEqual(result.tau1, t / 2, delta=1e-9)

    def test_commuting_case(self):
        result = conditional_components(build_two_level(2.0, 0.0), 0, '0', 1.5)
        self.assertAlmostEqual(result.tau1, 1.5, delta=1e-12)
        self.assertLessEqual(abs(result.tau2), 1e-10)
        self.assertTrue(result.definite)

    def test_level_zero_final_matches_closed_form(self):
        result = conditional_components(rabi_model(), 0, '0', 1.0)
        self.assertAlmostEqual(result.tau1, expected_tau1_given_0(1.0), delta=1e-9)
        self.assertAlmostEqual(result.prob_f, 1 - 0.75 * math.sin(2.0) ** 2, delta=1e-12)
        self.assertFalse(result.definite)

    def test_unpopulated_final(self):
        with self.assertRaises(VanishingPostselection) as ctx:
            conditional_components(rabi_model(), 0, '1', 0.0)
        self.assertEqual(ctx.exception.probability, 0.0)

    def test_tau2_vanishes_when_definite(self):
        model = identity_final_model()
        for t in (0.4, 2.2):
            result = conditional_components(model, 0, 'any', t)
            self.assertTrue(result.definite)
            self.assertLessEqual(abs(result.tau2), 1e-10)
            self.assertAlmostEqual(result.tau1, dwell_time(model, 0, t), delta=1e-12)

    def test_divergence_approaching_empty_level(self):
        model = rabi_model()
        offsets = np.logspace(-2, -3, 12)
        magnitudes = [abs(conditional_components(model, 0, '1', math.pi / 2 - delta).tau2) for delta in offsets]
        self.assertTrue(np.all(np.diff(magnitudes) > 0))
        with self.assertRaises(VanishingPostselection):
            conditional_components(model, 0, '1', math.pi / 2)


class ConditionalTimeTestCase(SimpleTestCase):
    def test_zero_coefficient(self):
        model = rabi_model()
        self.assertEqual(conditional_time(model, 0, '0', 1.0, 0.0), conditional_components(model, 0, '0', 1.0).tau1)

    def test_definite_case_ignores_detector(self):
        model = build_two_level(2.0, 0.0)
        for c in (-10.0, 0.0, 10.0):
            self.assertAlmostEqual(conditional_time(model, 0, '0', 3.0, c), 3.0, delta=1e-9 * 3.0)

    def test_unit_coefficient(self):
        model = rabi_model()
        result = conditional_components(model, 0, '0', 1.0)
        self.assertAlmostEqual(conditional_time(model, 0, '0', 1.0, 1.0), result.tau1 + result.tau2, delta=1e-15)
        self.assertNotAlmostEqual(result.tau2, 0.0, places=3)


class DefinitenessCheckTestCase(SimpleTestCase):
    def test_commuting_model(self):
        norm, definite = definiteness_check(build_two_level(2.0, 0.0), 0, '1', 1.0)
        self.assertLessEqual(norm, 1e-10)
        self.assertTrue(definite)

    def test_identity_final(self):
        norm, definite = definiteness_check(identity_final_model(), 0, 'any', 1.0)
        self.assertTrue(definite)

    def test_two_level_is_indefinite(self):
        norm, definite = definiteness_check(rabi_model(), 0, '1', 1.0)
        self.assertFalse(definite)
        self.assertGreater(norm, 1e-3)

    def test_zero_time(self):
        self.assertEqual(definiteness_check(rabi_model(), 0, '1', 0.0), (0.0, True))


class SumRuleReportTestCase(SimpleTestCase):
    def test_commuting_model(self):
        model = build_two_level(2.0, 0.0)
        with self.assertRaises(VanishingPostselection):
            sum_rule_report(model, 1.0)
        report = sum_rule_report(model, 1.0, skip_vanishing=True)
        self.assertEqual(report.skipped, ('1',))
        self.assertLessEqual(report.max_residual, 1e-10)

    def test_two_level(self):
        report = sum_rule_report(rabi_model(), 1.0)
        self.assertTrue(report.holds(1e-8))
        self.assertAlmostEqual(sum(report.probabilities.values()), 1.0, delta=1e-12)
        self.assertEqual(set(report.weighted_tau1), {0, 1})
        self.assertEqual(set(report.completeness_tau1), {'0', '1'})

    def test_requires_complete_finals(self):
        model = rabi_model()
        partial = validate_system({
            'hamiltonian': model.hamiltonian,
            'initial': model.initial,
            'observable': model.observable,
            'finals': {'labels': ['1'], 'projectors': [LEVEL_1]},
        })
        with self.assertRaises(IncompleteFinals):
            sum_rule_report(partial, 1.0)

    def test_random_models(self):
        rng = np.random.default_rng(91)
        checked = 0
        for trial in range(100):
            model = random_model(rng, 4, mixed=bool(trial % 3 == 0))
            try:
                report = sum_rule_report(model, 2.0, p_min=1e-6)
            except VanishingPostselection:
                continue
            checked += 1
            self.assertTrue(report.holds(1e-8), msg=f"trial {trial}: {report.max_residual:.3e}")
        self.assertGreater(checked, 90)
