from .context import qpesampling
from hypothesis import given, settings, strategies as st
import math
import numpy as np
import scipy.linalg
import unittest

evolution = qpesampling.evolution
PauliOperator = qpesampling.paulis.PauliOperator
circuit_unitary = qpesampling.simulator.circuit_unitary

times = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)


def commuting_hamiltonian():
    return PauliOperator({'II': 0.4, 'ZI': -0.3, 'IZ': 0.7, 'ZZ': 0.25})


class TestEvolution(unittest.TestCase):

    @given(times)
    @settings(max_examples=20, deadline=None)
    def test_evolution_matrix_sign(self, t):
        h = PauliOperator({'XY': 0.3, 'ZI': 1.1, 'IX': -0.6})
        np.testing.assert_allclose(
            evolution.evolution_matrix(h, t),
            scipy.linalg.expm(2j * math.pi * t * h.to_matrix()), atol=1e-10)

    def test_exact_gate_placement(self):
        instruction = evolution.exact_evolution_gate(commuting_hamiltonian(), 0.2, qubits=[3, 1])
        self.assertEqual(instruction.targets, (3, 1))
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            evolution.exact_evolution_gate(commuting_hamiltonian(), 0.2, qubits=[0])

    def test_non_hermitian_rejected(self):
        h = PauliOperator({'X': 1j})
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            evolution.evolution_matrix(h, 0.1)
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            evolution.trotter_evolution_circuit(h, 0.1, 1)

    def test_rotation_arguments(self):
        label, targets = evolution.rotation_arguments(qpesampling.paulis.PauliString('XIZ'), [5, 6, 7])
        self.assertEqual(label, 'XZ')
        self.assertEqual(targets, [5, 7])

    @given(times)
    @settings(max_examples=20, deadline=None)
    def test_trotter_exact_for_commuting_terms(self, t):
        h = commuting_hamiltonian()
        circuit = evolution.trotter_evolution_circuit(h, t, 1)
        np.testing.assert_allclose(circuit_unitary(circuit), evolution.evolution_matrix(h, t),
                                   atol=1e-10)

    def test_trotter_error_shrinks_with_steps(self):
        h = PauliOperator({'XX': 0.5, 'ZI': 0.8, 'IY': -0.4})
        exact = evolution.evolution_matrix(h, 0.3)
        errors = [
            np.linalg.norm(circuit_unitary(evolution.trotter_evolution_circuit(h, 0.3, steps)) - exact)
            for steps in (1, 4, 16)]
        self.assertGreater(errors[0], errors[1])
        self.assertGreater(errors[1], errors[2])
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            evolution.trotter_evolution_circuit(h, 0.3, 0)

    @given(times)
    @settings(max_examples=20, deadline=None)
    def test_controlled_evolution(self, t):
        h = commuting_hamiltonian()
        circuit = evolution.controlled_pauli_evolution(h, t, control=2, qubits=[0, 1])
        expected = scipy.linalg.block_diag(np.eye(4), evolution.evolution_matrix(h, t))
        np.testing.assert_allclose(circuit_unitary(circuit), expected, atol=1e-10)

    def test_controlled_evolution_overlap(self):
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            evolution.controlled_pauli_evolution(commuting_hamiltonian(), 0.1, control=1)
