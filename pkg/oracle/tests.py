import math

import numpy as np
from django.test import SimpleTestCase

from model.testing import random_model
from model.validation import validate_system
from qcore.models import State
from timefunc.exceptions import VanishingPostselection
from timefunc.times import conditional_components, dwell_time
from twolevel.systems import build_two_level
from .composite import evolve_composite, evolve_ensemble, extract_time, mean_momentum, oracle_time, postselect
from .convergence import convergence_study
from .detector import detector_moments, gaussian_moments, make_detector
from .exceptions import GridTooSmall, InvalidDetector, InvalidSweep, MixedStateUnsupported, ZeroCoupling
from .models import ConvergenceRow, ConvergenceTable

SWEEP = [1e-2, 5e-3, 2.5e-3, 1.25e-3]


def rabi_model():
    return build_two_level(2.0, math.sqrt(3.0))


def identity_final_model():
    model = rabi_model()
    return validate_system({
        'hamiltonian': model.hamiltonian,
        'initial': model.initial,
        'observable': model.observable,
        'finals': {'labels': ['any'], 'projectors': [np.eye(2)], 'complete': True},
    })


class MakeDetectorTestCase(SimpleTestCase):
    def test_default_grid(self):
        d = make_detector(gamma=1e-3)
        self.assertEqual(d.N, 512)
        self.assertAlmostEqual(d.Q, 16.0)
        self.assertAlmostEqual(d.dq, 32 / 512)
        self.assertAlmostEqual(d.norm(), 1.0, delta=1e-9)
        peak = np.max(np.abs(d.amplitudes) ** 2)
        self.assertLessEqual(abs(d.amplitudes[0]) ** 2, 1e-12 * peak)

    def test_rejects_bad_grid(self):
        with self.assertRaises(InvalidDetector):
            make_detector(N=500, gamma=1e-3)
        with self.assertRaises(InvalidDetector):
            make_detector(sigma=0.0, gamma=1e-3)
        with self.assertRaises(GridTooSmall):
            make_detector(Q=4.0, gamma=1e-3)
        with self.assertRaises(GridTooSmall):
            make_detector(q0=10.0, gamma=1e-3)

    def test_rejects_zero_coupling(self):
        with self.assertRaises(ZeroCoupling):
            make_detector(gamma=0.0)

    def test_with_gamma_keeps_shape(self):
        d = make_detector(chirp=1.0, gamma=1e-2)
        other = d.with_gamma(1e-3)
        self.assertEqual(other.gamma, 1e-3)
        self.assertIs(other.amplitudes, d.amplitudes)


class DetectorMomentsTestCase(SimpleTestCase):
    def test_real_centred_gaussian(self):
        moments = detector_moments(make_detector(gamma=1e-3))
        for value in (moments.mean_q, moments.mean_p, moments.re_qp, moments.coeff_c):
            self.assertLessEqual(abs(value), 1e-9)

    def test_momentum_shift(self):
        self.assertAlmostEqual(detector_moments(make_detector(p0=2.0, gamma=1e-3)).mean_p, 2.0, delta=1e-6)

    def test_position_shift(self):
        moments = detector_moments(make_detector(q0=3.0, gamma=1e-3))
        self.assertAlmostEqual(moments.mean_q, 3.0, delta=1e-9)
        self.assertAlmostEqual(moments.coeff_c, 0.0, delta=1e-9)

    def test_chirped_against_closed_form(self):
        for chirp, q0, p0 in ((1.0, 0.0, 0.0), (-0.5, 0.5, 1.0), (2.0, -1.0, 0.3)):
            spectral = detector_moments(make_detector(chirp=chirp, q0=q0, p0=p0, gamma=1e-3))
            closed = gaussian_moments(chirp=chirp, q0=q0, p0=p0)
            self.assertAlmostEqual(spectral.mean_q, closed.mean_q, delta=1e-8)
            self.assertAlmostEqual(spectral.mean_p, closed.mean_p, delta=1e-8)
            self.assertAlmostEqual(spectral.re_qp, closed.re_qp, delta=1e-8)
            self.assertAlmostEqual(spectral.coeff_c, chirp, delta=1e-8)


class EvolveCompositeTestCase(SimpleTestCase):
    def test_zero_time(self):
        d = make_detector(gamma=0.5)
        composite = evolve_composite(rabi_model(), d, 0, 0.0)
        np.testing.assert_allclose(composite.spinors, np.outer(d.amplitudes, [1, 0]))

    def test_zero_coupling_leaves_pointer_alone(self):
        d = make_detector(p0=1.0, gamma=1e-2)
        before = mean_momentum(evolve_composite(rabi_model(), d, 0, 0.0))
        after = mean_momentum(evolve_composite(rabi_model(), d, 0, 2.0, coupling=np.zeros((2, 2))))
        self.assertAlmostEqual(after, before, delta=1e-12)

    def test_norm_preserved(self):
        composite = evolve_composite(rabi_model(), make_detector(gamma=1e-3), 0, 1.0)
        self.assertAlmostEqual(composite.norm(), 1.0, delta=1e-10)
        strong = evolve_composite(rabi_model(), make_detector(chirp=1.0, gamma=0.1), 1, 3.0)
        self.assertAlmostEqual(strong.norm(), 1.0, delta=1e-8)

    def test_mixed_state_needs_ensemble(self):
        model = random_model(np.random.default_rng(3), 3, mixed=True)
        with self.assertRaises(MixedStateUnsupported):
            evolve_composite(model, make_detector(gamma=1e-3), 0, 1.0)
        runs = evolve_ensemble(model, make_detector(gamma=1e-3), 0, 1.0)
        self.assertAlmostEqual(runs.norm(), 1.0, delta=1e-8)
        self.assertAlmostEqual(float(np.sum(runs.weights)), 1.0, delta=1e-12)

    def test_explicit_pure_state(self):
        model = rabi_model()
        composite = evolve_composite(model, make_detector(gamma=1e-3), 0, 0.0, state=State.pure([0, 1]))
        np.testing.assert_allclose(composite.spinors[:, 0], 0)


class MeanMomentumTestCase(SimpleTestCase):
    def test_initial_pointer(self):
        model = rabi_model()
        self.assertAlmostEqual(mean_momentum(evolve_composite(model, make_detector(gamma=1e-3), 0, 0.0)), 0.0, delta=1e-9)
        moving = make_detector(p0=2.0, gamma=1e-3)
        self.assertAlmostEqual(mean_momentum(evolve_composite(model, moving, 0, 0.0)), 2.0, delta=1e-6)

    def test_impulse_bounded_by_coupling(self):
        gamma, t = 0.05, 1.5
        d = make_detector(gamma=gamma)
        delta_p = mean_momentum(evolve_composite(rabi_model(), d, 0, t)) - detector_moments(d).mean_p
        self.assertTrue(math.isfinite(delta_p))
        self.assertLessEqual(abs(delta_p), gamma * t)
        self.assertLess(delta_p, 0.0)


class PostselectTestCase(SimpleTestCase):
    def test_identity_final(self):
        model = identity_final_model()
        composite = evolve_composite(model, make_detector(gamma=1e-2), 0, 1.0)
        probability, momentum = postselect(composite, model, 'any')
        self.assertAlmostEqual(probability, 1.0, delta=1e-10)
        self.assertAlmostEqual(momentum, mean_momentum(composite), delta=1e-12)

    def test_orthogonal_final_at_start(self):
        model = rabi_model()
        composite = evolve_composite(model, make_detector(gamma=1e-3), 0, 0.0)
        with self.assertRaises(VanishingPostselection):
            postselect(composite, model, '1')

    def test_level_one_final_halves_time(self):
        model = rabi_model()
        tau = oracle_time(model, make_detector(gamma=1e-4), 0, 1.0, final_label='1')
        self.assertAlmostEqual(tau, 0.5, delta=1e-3)


class ExtractTimeTestCase(SimpleTestCase):
    def test_values(self):
        self.assertEqual(extract_time(0.0, 0.3), 0.0)
        self.assertAlmostEqual(extract_time(-0.3 * 2.5, 0.3), 2.5, delta=1e-15)
        self.assertAlmostEqual(extract_time(-0.5 * 1e-3, 1e-3), 0.5, delta=1e-15)

    def test_zero_coupling(self):
        with self.assertRaises(ZeroCoupling):
            extract_time(1.0, 0.0)


class ConvergenceTableTestCase(SimpleTestCase):
    def table(self, errors, tau=1.0):
        rows = tuple(ConvergenceRow(gamma=g, tau_oracle=tau + e, tau_formula=tau, error=e)
                     for g, e in zip(SWEEP, errors))
        return ConvergenceTable(rows=rows, chi_index=0, final_label=None, t=1.0, detector_coeff=0.0)

    def test_first_order(self):
        table = self.table([4e-4, 2e-4, 1e-4, 5e-5])
        np.testing.assert_allclose(table.ratios(), [0.5, 0.5, 0.5])
        self.assertAlmostEqual(table.observed_order(), 1.0, delta=1e-9)

    def test_pre_asymptotic_rows_are_skipped(self):
        table = self.table([0.5, 2e-4, 1e-4, 5e-5])
        self.assertEqual(len(table.ratios()), 2)


class ConvergenceStudyTestCase(SimpleTestCase):
    def test_unconditional_first_order(self):
        model = rabi_model()
        table = convergence_study(model, 0, None, 1.0, SWEEP, make_detector(q0=0.5, gamma=SWEEP[0]))
        self.assertEqual([row.gamma for row in table.rows], SWEEP)
        self.assertAlmostEqual(table.rows[0].tau_formula, dwell_time(model, 0, 1.0), delta=1e-15)
        ratios = table.ratios()
        self.assertEqual(len(ratios), 3)
        for ratio in ratios:
            self.assertGreaterEqual(ratio, 0.3)
            self.assertLessEqual(ratio, 0.7)
        self.assertLessEqual(table.final_error, 1e-4)

    def test_centred_pointer_cancels_first_order(self):
        table = convergence_study(rabi_model(), 0, None, 1.0, SWEEP, make_detector(gamma=SWEEP[0]))
        self.assertGreater(table.observed_order(), 1.7)
        self.assertLess(table.observed_order(), 2.3)

    def test_conditional_real_pointer(self):
        table = convergence_study(rabi_model(), 0, '1', 1.0, SWEEP[:3], make_detector(gamma=SWEEP[0]))
        self.assertAlmostEqual(table.detector_coeff, 0.0, delta=1e-9)
        self.assertAlmostEqual(table.rows[0].tau_formula, 0.5, delta=1e-9)
        self.assertAlmostEqual(table.rows[-1].tau_oracle, 0.5, delta=1e-3)

    def test_conditional_chirped_pointer_reads_commutator_part(self):
        model = rabi_model()
        components = conditional_components(model, 0, '0', 1.0)
        table = convergence_study(model, 0, '0', 1.0, [4e-3, 2e-3, 1e-3], make_detector(chirp=1.0, gamma=4e-3))
        self.assertAlmostEqual(table.detector_coeff, 1.0, delta=1e-8)
        limit = table.rows[-1].tau_oracle
        self.assertAlmostEqual(limit, components.tau1 + components.tau2, delta=1e-3)
        self.assertGreater(abs(limit - components.tau1), 1e-2)

    def test_grid_refinement(self):
        model = rabi_model()
        coarse = oracle_time(model, make_detector(N=512, q0=0.5, gamma=1e-3), 0, 1.0)
        fine = oracle_time(model, make_detector(N=1024, q0=0.5, gamma=1e-3), 0, 1.0)
        self.assertAlmostEqual(coarse, fine, delta=1e-6)

    def test_mixed_initial_state(self):
        model = random_model(np.random.default_rng(17), 3, chi_parts=2, mixed=True)
        tau = oracle_time(model, make_detector(gamma=1e-3), 1, 1.2)
        self.assertAlmostEqual(tau, dwell_time(model, 1, 1.2), delta=1e-4)

    def test_invalid_sweeps(self):
        model, d = rabi_model(), make_detector(gamma=1e-2)
        for gammas in ([], [1e-3, 2e-3], [1e-2, -1e-3], [1e-2, 1e-2]):
            with self.assertRaises(InvalidSweep):
                convergence_study(model, 0, None, 1.0, gammas, d)

