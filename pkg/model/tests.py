import numpy as np
from django.test import SimpleTestCase

from qcore.exceptions import DimMismatch, InvalidState
from qcore.linalg import hermitian_eig
from qcore.models import Operator, SIGMA_3, SIGMA_MINUS, SIGMA_PLUS
from qcore.testing import random_partition
from .exceptions import (
    DegenerateInput,
    IncompleteFinalFamily,
    IncompleteObservable,
    InvalidProjector,
    MissingComponent,
    UnknownFinal,
    UnknownIndex,
)
from .validation import projector_from_subspace, validate_observable, validate_system

P0 = np.diag([1.0, 0.0])
P1 = np.diag([0.0, 1.0])


def two_level_raw(omega=2.0, v=np.sqrt(3.0), **overrides):
    hamiltonian = SIGMA_3 * (omega / 2) + SIGMA_PLUS * v + SIGMA_MINUS * np.conj(v)
    raw = {
        'hamiltonian': hamiltonian.matrix,
        'initial': [1.0, 0.0],
        'observable': {'values': [0.0, 1.0], 'projectors': [P0, P1]},
        'finals': {'labels': ['0', '1'], 'projectors': [P0, P1], 'complete': True},
    }
    raw.update(overrides)
    return raw


class ValidateSystemTestCase(SimpleTestCase):
    def test_two_level_scenario(self):
        model = validate_system(two_level_raw())
        self.assertEqual(model.dim, 2)
        self.assertEqual(list(model.chi_indices), [0, 1])
        self.assertEqual(model.final_labels, ('0', '1'))
        np.testing.assert_allclose(model.spectrum.eigenvalues, [-2, 2], atol=1e-12)

    def test_repeated_projector_is_incomplete(self):
        raw = two_level_raw(observable={'values': [0.0, 1.0], 'projectors': [P0, P0]})
        with self.assertRaises(IncompleteObservable) as ctx:
            validate_system(raw)
        self.assertEqual(ctx.exception.field, 'observable.projectors')

    def test_trace_two_density(self):
        with self.assertRaises(InvalidState) as ctx:
            validate_system(two_level_raw(initial=np.eye(2)))
        self.assertEqual(ctx.exception.field, 'initial')

    def test_non_idempotent_projector(self):
        raw = two_level_raw(observable={'values': [0.0, 1.0], 'projectors': [2 * P0, P1]})
        with self.assertRaises(InvalidProjector) as ctx:
            validate_system(raw)
        self.assertEqual(ctx.exception.field, 'observable.projectors[0]')

    def test_state_dimension_mismatch(self):
        with self.assertRaises(DimMismatch):
            validate_system(two_level_raw(initial=[1.0, 0.0, 0.0]))

    def test_incomplete_finals_declared_complete(self):
        raw = two_level_raw(finals={'labels': ['0'], 'projectors': [P0], 'complete': True})
        with self.assertRaises(IncompleteFinalFamily):
            validate_system(raw)

    def test_single_final_subspace_allowed(self):
        model = validate_system(two_level_raw(finals={'labels': ['up'], 'projectors': [P1]}))
        self.assertFalse(model.finals.complete)

    def test_missing_key_is_named(self):
        raw = two_level_raw()
        del raw['initial']
        with self.assertRaises(MissingComponent) as ctx:
            validate_system(raw)
        self.assertEqual(ctx.exception.field, 'initial')

    def test_idempotent(self):
        model = validate_system(two_level_raw())
        self.assertIs(validate_system(model), model)

    def test_lookup_errors(self):
        model = validate_system(two_level_raw())
        with self.assertRaises(UnknownIndex):
            model.projector(2)
        with self.assertRaises(UnknownFinal):
            model.final_projector('2')
        np.testing.assert_allclose(model.final_projector('1').matrix, P1)


class ObservableOperatorTestCase(SimpleTestCase):
    def test_eigenvalues_repeat_with_rank(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            dim = int(rng.integers(2, 7))
            parts = int(rng.integers(1, dim + 1))
            blocks = random_partition(rng, dim, parts)
            values = rng.normal(size=parts)
            projectors = [block @ block.conj().T for block in blocks]
            observable = validate_observable({'values': values, 'projectors': projectors}, dim)
            expected = np.sort(np.repeat(values, [block.shape[1] for block in blocks]))
            np.testing.assert_allclose(hermitian_eig(observable.operator()).eigenvalues, expected, atol=1e-9)


class ProjectorFromSubspaceTestCase(SimpleTestCase):
    def test_single_basis_vector(self):
        np.testing.assert_allclose(projector_from_subspace([[1, 0]]).matrix, P0, atol=1e-15)

    def test_full_basis(self):
        np.testing.assert_allclose(projector_from_subspace([[1, 0], [0, 1]]).matrix, np.eye(2), atol=1e-15)

    def test_diagonal_vector(self):
        P = projector_from_subspace([np.array([1, 1]) / np.sqrt(2)])
        np.testing.assert_allclose(P.matrix, 0.5 * np.ones((2, 2)), atol=1e-15)

    def test_rank_and_idempotency(self):
        rng = np.random.default_rng(12)
        vectors = [rng.normal(size=5) + 1j * rng.normal(size=5) for _ in range(3)]
        P = projector_from_subspace(vectors).matrix
        np.testing.assert_allclose(P @ P, P, atol=1e-10)
        self.assertAlmostEqual(np.trace(P).real, 3.0, places=10)
        for vector in vectors:
            np.testing.assert_allclose(P @ vector, vector, atol=1e-10)

    def test_dependent_vectors(self):
        with self.assertRaises(DegenerateInput):
            projector_from_subspace([[1, 1], [2, 2]])

    def test_operator_input_passthrough(self):
        P = Operator(P0, hermitian_hint=True)
        model = validate_system(two_level_raw(finals={'labels': ['0'], 'projectors': [P]}))
        self.assertIs(model.final_projector('0'), P)
