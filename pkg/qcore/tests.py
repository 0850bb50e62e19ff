import numpy as np
from django.test import SimpleTestCase

from .exceptions import DimMismatch, InvalidOperator, InvalidState, NotHermitian
from .linalg import commutator, ensemble, evolve_unitary, expectation, frob_norm, hermitian_eig
from .models import Operator, SIGMA_1, SIGMA_2, SIGMA_3, SIGMA_MINUS, SIGMA_PLUS, State
from .testing import random_density, random_hermitian

KET0 = np.array([1.0, 0.0])


def two_level_hamiltonian(omega=2.0, v=np.sqrt(3.0)):
    return SIGMA_3 * (omega / 2) + SIGMA_PLUS * v + SIGMA_MINUS * np.conj(v)


class OperatorTestCase(SimpleTestCase):
    def test_rejects_non_square(self):
        with self.assertRaises(InvalidOperator):
            Operator(np.zeros((2, 3)))

    def test_rejects_nan(self):
        with self.assertRaises(InvalidOperator):
            Operator(np.array([[np.nan, 0], [0, 1]]))

    def test_hermitian_hint_is_checked(self):
        with self.assertRaises(NotHermitian):
            Operator(np.array([[0, 1], [0, 0]]), hermitian_hint=True)

    def test_entries_are_read_only(self):
        A = Operator.identity(2)
        with self.assertRaises(ValueError):
            A.matrix[0, 0] = 5


class StateTestCase(SimpleTestCase):
    def test_pure_state_must_be_normalized(self):
        with self.assertRaises(InvalidState):
            State.pure([1.0, 1.0])

    def test_density_trace_two_is_rejected(self):
        with self.assertRaises(InvalidState):
            State.mixed(np.diag([1.0, 1.0]))

    def test_density_negative_eigenvalue_is_rejected(self):
        with self.assertRaises(InvalidState):
            State.mixed(np.diag([1.5, -0.5]))

    def test_ensemble_of_mixed_state(self):
        rho = State.mixed(np.diag([0.25, 0.75]))
        weights, members = ensemble(rho)
        np.testing.assert_allclose(sorted(weights), [0.25, 0.75], atol=1e-12)
        self.assertTrue(all(member.is_pure for member in members))


class HermitianEigTestCase(SimpleTestCase):
    def test_identity(self):
        spectrum = hermitian_eig(Operator.identity(2))
        np.testing.assert_allclose(spectrum.eigenvalues, [1, 1])

    def test_sigma3(self):
        np.testing.assert_allclose(hermitian_eig(SIGMA_3).eigenvalues, [-1, 1])

    def test_two_level_rabi_frequency(self):
        spectrum = hermitian_eig(two_level_hamiltonian())
        np.testing.assert_allclose(spectrum.eigenvalues, [-2, 2], atol=1e-12)

    def test_not_hermitian(self):
        with self.assertRaises(NotHermitian):
            hermitian_eig(Operator(np.array([[0, 1], [2, 0]])))

    def test_reconstruction_and_unitarity_on_random_inputs(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            dim = int(rng.integers(1, 9))
            A = random_hermitian(rng, dim)
            spectrum = hermitian_eig(A)
            V = spectrum.basis.matrix
            self.assertLessEqual(np.linalg.norm(V.conj().T @ V - np.eye(dim)), 1e-9)
            rebuilt = V @ np.diag(spectrum.eigenvalues) @ V.conj().T
            self.assertLessEqual(np.linalg.norm(rebuilt - A.matrix), 1e-9 * max(frob_norm(A), 1e-300))
            self.assertTrue(np.all(np.diff(spectrum.eigenvalues) >= 0))

    def test_deterministic(self):
        A = random_hermitian(np.random.default_rng(3), 5)
        first, second = hermitian_eig(A), hermitian_eig(A)
        np.testing.assert_array_equal(first.eigenvalues, second.eigenvalues)
        np.testing.assert_array_equal(first.basis.matrix, second.basis.matrix)


class EvolveUnitaryTestCase(SimpleTestCase):
    def test_zero_time_is_identity(self):
        U = evolve_unitary(two_level_hamiltonian(), 0.0)
        np.testing.assert_allclose(U.matrix, np.eye(2), atol=1e-15)

    def test_sigma3_half_period(self):
        U = evolve_unitary(SIGMA_3, np.pi)
        np.testing.assert_allclose(U.matrix, -np.eye(2), atol=1e-12)

    def test_two_level_unitarity(self):
        U = evolve_unitary(two_level_hamiltonian(), np.pi / 4).matrix
        np.testing.assert_allclose(U.conj().T @ U, np.eye(2), atol=1e-12)

    def test_group_law_on_random_hamiltonians(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            dim = int(rng.integers(1, 9))
            H = random_hermitian(rng, dim)
            t1, t2 = rng.uniform(-3, 3, size=2)
            U1, U2 = evolve_unitary(H, t1).matrix, evolve_unitary(H, t2).matrix
            U12 = evolve_unitary(H, t1 + t2).matrix
            self.assertLessEqual(np.linalg.norm(U1 @ U2 - U12), 1e-9)
            self.assertLessEqual(np.linalg.norm(U12.conj().T @ U12 - np.eye(dim)), 1e-9)


class CommutatorTestCase(SimpleTestCase):
    def test_self_commutes(self):
        np.testing.assert_allclose(commutator(SIGMA_3, SIGMA_3).matrix, 0)

    def test_pauli_algebra(self):
        np.testing.assert_allclose(commutator(SIGMA_1, SIGMA_2).matrix, 2j * SIGMA_3.matrix)

    def test_diagonals_commute(self):
        np.testing.assert_allclose(commutator(Operator.diag([1, 2]), Operator.diag([5, -3])).matrix, 0)

    def test_anti_hermitian_for_hermitian_inputs(self):
        rng = np.random.default_rng(8)
        C = commutator(random_hermitian(rng, 4), random_hermitian(rng, 4)).matrix
        self.assertLessEqual(np.max(np.abs(C + C.conj().T)), 1e-10)

    def test_dim_mismatch(self):
        with self.assertRaises(DimMismatch):
            commutator(Operator.identity(2), Operator.identity(3))


class ExpectationTestCase(SimpleTestCase):
    def test_basis_state(self):
        self.assertAlmostEqual(expectation(State.pure(KET0), SIGMA_3), 1.0)
        self.assertAlmostEqual(expectation(State.pure(KET0), SIGMA_1), 0.0)

    def test_maximally_mixed_traceless(self):
        rho = State.mixed(np.eye(2) / 2)
        for A in (SIGMA_1, SIGMA_2, SIGMA_3):
            self.assertAlmostEqual(abs(expectation(rho, A)), 0.0)

    def test_real_for_hermitian(self):
        rng = np.random.default_rng(2)
        value = expectation(random_density(rng, 5), random_hermitian(rng, 5))
        self.assertLessEqual(abs(value.imag), 1e-12)

    def test_linearity(self):
        rng = np.random.default_rng(9)
        rho = random_density(rng, 4)
        A, B = random_hermitian(rng, 4), random_hermitian(rng, 4)
        alpha, beta = 0.7 - 0.2j, -1.3
        combined = expectation(rho, A * alpha + B * beta)
        separate = alpha * expectation(rho, A) + beta * expectation(rho, B)
        self.assertLessEqual(abs(combined - separate), 1e-12 * (1 + frob_norm(A) + frob_norm(B)))

    def test_dim_mismatch(self):
        with self.assertRaises(DimMismatch):
            expectation(State.pure(KET0), Operator.identity(3))


class FrobNormTestCase(SimpleTestCase):
    def test_values(self):
        self.assertEqual(frob_norm(Operator.zeros(3)), 0.0)
        self.assertAlmostEqual(frob_norm(Operator.identity(2)), np.sqrt(2))
        self.assertAlmostEqual(frob_norm(SIGMA_1), np.sqrt(2))
