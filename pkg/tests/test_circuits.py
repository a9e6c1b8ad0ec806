from .context import qpesampling
from hypothesis import given, settings, strategies as st
import math
import numpy as np
import unittest

gates = qpesampling.gates
Circuit = qpesampling.circuits.Circuit
Instruction = gates.Instruction

angles = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi, allow_nan=False)


class TestGates(unittest.TestCase):

    def test_rotation_convention(self):
        np.testing.assert_allclose(gates.rz(math.pi), np.diag([-1j, 1j]), atol=1e-12)
        np.testing.assert_allclose(gates.rx(math.pi), [[0, -1j], [-1j, 0]], atol=1e-12)
        np.testing.assert_allclose(gates.phase(math.pi / 2), gates.FIXED_GATES['s'], atol=1e-12)

    def test_ms_is_zz_rotation(self):
        np.testing.assert_allclose(gates.ms(0.7), gates.pauli_rotation('ZZ', 0.7), atol=1e-12)

    def test_cx_control_is_first_target(self):
        circuit = Circuit(2).x(0).cx(0, 1)
        state = qpesampling.simulator.run_unitary(circuit, qpesampling.simulator.StateVector.zero(2))
        np.testing.assert_allclose(state.probabilities(), [0, 0, 0, 1], atol=1e-12)

    @given(angles)
    @settings(max_examples=30, deadline=None)
    def test_givens_is_xy_exponential(self, theta):
        generator = (qpesampling.paulis.PauliOperator({'YX': 1.0, 'XY': -1.0})).to_matrix()
        w, v = np.linalg.eigh(generator)
        expected = (v * np.exp(0.5j * theta * w)) @ v.conj().T
        np.testing.assert_allclose(gates.givens(theta), expected, atol=1e-10)

    @given(st.sampled_from(['rx', 'ry', 'rz', 'p', 'cp', 'ms', 'givens']), angles)
    @settings(max_examples=40, deadline=None)
    def test_inverse(self, name, theta):
        targets = [0] if gates.GATE_ARITY[name] == 1 else [0, 1]
        instruction = Instruction(gates.GATE, targets, name=name, params=[theta])
        product = instruction.inverse().matrix @ instruction.matrix
        np.testing.assert_allclose(product, np.eye(len(product)), atol=1e-10)

    def test_inverse_of_s_and_unitary(self):
        s = Instruction(gates.GATE, [0], name='s')
        self.assertEqual(s.inverse().name, 'sdg')
        u = Instruction(gates.GATE, [0], name='unitary', matrix=gates.ry(0.4))
        np.testing.assert_allclose(u.inverse().matrix, gates.ry(-0.4), atol=1e-12)

    def test_multiplexed_rotation_blocks(self):
        matrix = Instruction(gates.GATE, [0, 1], name='mux_ry', params=[0.3, -1.1]).matrix
        np.testing.assert_allclose(matrix[:2, :2], gates.ry(0.3))
        np.testing.assert_allclose(matrix[2:, 2:], gates.ry(-1.1))

    def test_validation(self):
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            Instruction(gates.GATE, [0, 0], name='cx')
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            Instruction(gates.GATE, [0], name='rx')
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            Instruction(gates.GATE, [0], name='toffoli')
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            Instruction(gates.GATE, [0], name='rz', params=[float('nan')])
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            Instruction(gates.MEASURE, [0])

    def test_controlled(self):
        instruction = gates.controlled(Instruction(gates.GATE, [0], name='x'), 1)
        np.testing.assert_allclose(
            instruction.matrix, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
        self.assertEqual(instruction.targets, (0, 1))
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            gates.controlled(Instruction(gates.GATE, [0], name='x'), 0)
        payload = Instruction(gates.GATE, [0], name='unitary', matrix=[[1, 0], [0, 2]], label='bad')
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            gates.controlled(payload, 1)

    def test_remapped_and_conditioned(self):
        instruction = Instruction(gates.GATE, [0], name='x').conditioned(0)
        moved = instruction.remapped({0: 3}, {0: 2})
        self.assertEqual(moved.targets, (3,))
        self.assertEqual(moved.condition, (2, 1))


class TestCircuit(unittest.TestCase):

    def test_register_bounds(self):
        circuit = Circuit(2, 1)
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            circuit.h(2)
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            circuit.measure(0, 1)
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            circuit.x(0, condition=(3, 1))

    def test_counts(self):
        circuit = Circuit(3, 2).h(0).cx(0, 1).ms(0.2, 1, 2).measure(0, 0).x(1).measure(1, 1)
        self.assertEqual(circuit.n_two_qubit, 2)
        self.assertEqual(circuit.n_measurements, 2)
        self.assertEqual(circuit.n_mid_circuit_measurements, 1)
        self.assertTrue(circuit.is_dynamic())
        self.assertFalse(Circuit(1, 1).h(0).measure(0, 0).is_dynamic())

    def test_compose_remaps(self):
        inner = Circuit(1, 1).h(0).measure(0, 0)
        inner.add_detector(0, 'x', 1)
        outer = Circuit(3, 2).cx(0, 1)
        outer.compose(inner, qubits=[2], clbits=[1])
        self.assertEqual(outer.instructions[-1].targets, (2,))
        self.assertEqual(outer.instructions[-1].clbit, 1)
        self.assertEqual(outer.detectors, [qpesampling.circuits.Detector(1, 'x', 1, 1)])
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            outer.compose(inner, qubits=[0, 1])

    def test_inverse(self):
        circuit = Circuit(2).h(0).cp(0.3, 0, 1).ry(0.2, 1)
        unitary = qpesampling.simulator.circuit_unitary(circuit)
        inverse = qpesampling.simulator.circuit_unitary(circuit.inverse())
        np.testing.assert_allclose(inverse @ unitary, np.eye(4), atol=1e-12)
        with self.assertRaises(qpesampling.errors.QpeExecutionError):
            Circuit(1, 1).measure(0, 0).inverse()

    def test_detectors(self):
        circuit = Circuit(2, 2).cx(0, 1)
        circuit.add_detector(1, 'z', 2)
        self.assertEqual(circuit.detection_bits, [1])
        self.assertEqual(circuit.detectors[0].cumulative_n2q, 1)
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            circuit.add_detector(0, 'y', 1)

    def test_add_clbits_and_text(self):
        circuit = Circuit(1, name='demo')
        self.assertEqual(circuit.add_clbits(2), 0)
        self.assertEqual(circuit.n_clbits, 2)
        circuit.rz(0.5, 0).measure(0, 1)
        self.assertEqual(circuit.to_text().splitlines()[1:], ['rz (0.5) q0', 'measure q0 -> c1'])
