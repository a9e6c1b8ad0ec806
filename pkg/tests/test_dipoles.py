from .context import qpesampling
from hypothesis import given, settings, strategies as st
import numpy as np
import unittest

dipoles = qpesampling.dipoles
fermions = qpesampling.fermions
StateVector = qpesampling.simulator.StateVector
circuit_unitary = qpesampling.simulator.circuit_unitary


def random_dipole(n_modes, seed):
    rng = np.random.default_rng(seed)
    entries = rng.normal(size=(n_modes, n_modes))
    return dipoles.DipoleMatrix('z', entries + entries.T)


def random_state(n_qubits, seed):
    rng = np.random.default_rng(seed)
    return StateVector(rng.normal(size=2 ** n_qubits) + 1j * rng.normal(size=2 ** n_qubits),
                       normalize=True)


def unit_vector(n, seed):
    u = np.random.default_rng(seed).normal(size=n)
    return u / np.linalg.norm(u)


class TestDipoleMatrix(unittest.TestCase):

    def test_validation(self):
        with self.assertRaises(qpesampling.errors.QpeValidationError) as caught:
            dipoles.DipoleMatrix('w', [[0.0, 1.0], [2.0, 0.0]])
        self.assertEqual(len(caught.exception.errors), 2)
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            dipoles.DipoleMatrix('x', np.zeros((2, 3)))
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            dipoles.DipoleMatrix('x', [[1j, 0], [0, 0]])

    def test_diagonal_dipole_counts_occupations(self):
        mu = dipoles.DipoleMatrix('x', [[2.0]])
        np.testing.assert_allclose(np.diag(mu.to_pauli().to_matrix()).real, [0, 2, 2, 4])


class TestMajoranaForm(unittest.TestCase):

    @given(st.integers(min_value=1, max_value=3), st.integers(min_value=0, max_value=2 ** 16))
    @settings(max_examples=15, deadline=None)
    def test_decomposition_reassembles(self, n_modes, seed):
        mu = random_dipole(n_modes, seed)
        form = dipoles.dipole_majorana_decompose(mu)
        np.testing.assert_allclose(form.reconstruct(), mu.entries, atol=1e-10)
        self.assertAlmostEqual(form.e_const, np.trace(mu.entries))
        magnitudes = [abs(eps) for eps, _ in form.modes]
        self.assertEqual(magnitudes, sorted(magnitudes, reverse=True))
        self.assertTrue(form.to_pauli().allclose(mu.to_pauli()))

    def test_rejects_non_orthonormal_modes(self):
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            dipoles.MajoranaDipoleForm(0.0, [(1.0, [1.0, 0.0]), (1.0, [1.0, 1.0])])
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            dipoles.MajoranaDipoleForm(0.0, [])

    @given(st.integers(min_value=0, max_value=2 ** 16), st.sampled_from(fermions.SPINS),
           st.sampled_from([0, 1]))
    @settings(max_examples=20, deadline=None)
    def test_rotation_conjugates_majorana(self, seed, spin, flavour):
        u = unit_vector(3, seed)
        form = dipoles.MajoranaDipoleForm(0.0, [(1.0, u)])
        rotation = circuit_unitary(dipoles.majorana_rotation_circuit(u, spin, flavour))
        gamma = fermions.majorana_operator(0, spin, flavour, 3).to_matrix()
        np.testing.assert_allclose(rotation.conj().T @ gamma @ rotation,
                                   form.rotated_majorana(u, spin, flavour).to_matrix(), atol=1e-10)

    @given(st.integers(min_value=0, max_value=2 ** 16), st.sampled_from(fermions.SPINS))
    @settings(max_examples=20, deadline=None)
    def test_combined_rotation_moves_both_flavours(self, seed, spin):
        u = unit_vector(3, seed)
        form = dipoles.MajoranaDipoleForm(0.0, [(1.0, u)])
        rotation = circuit_unitary(dipoles.majorana_rotation_circuit(u, spin, combined=True))
        for flavour in (0, 1):
            gamma = fermions.majorana_operator(0, spin, flavour, 3).to_matrix()
            np.testing.assert_allclose(
                rotation.conj().T @ gamma @ rotation,
                form.rotated_majorana(u, spin, flavour).to_matrix(), atol=1e-10)

    def test_rotation_rejects_bad_vectors(self):
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            dipoles.majorana_rotation_circuit([0.0, 0.0], fermions.ALPHA)
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            dipoles.majorana_rotation_circuit([1.0, 1.0], fermions.ALPHA)
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            dipoles.majorana_rotation_circuit([1.0, 0.0], fermions.ALPHA, flavour=2)

    def test_pair_unitary(self):
        u = unit_vector(2, 4)
        form = dipoles.MajoranaDipoleForm(0.0, [(1.0, u)])
        for spin in fermions.SPINS:
            pair = (form.rotated_majorana(u, spin, 0) * form.rotated_majorana(u, spin, 1)) * 1j
            np.testing.assert_allclose(circuit_unitary(form.pair_unitary_circuit(u, spin)),
                                       pair.to_matrix(), atol=1e-10)

    def test_lcu_terms_sum_to_operator(self):
        form = dipoles.dipole_majorana_decompose(random_dipole(2, 8))
        terms = form.lcu_terms()
        total = sum(weight * circuit_unitary(circuit) for weight, circuit in terms)
        np.testing.assert_allclose(total, form.to_pauli().to_matrix(), atol=1e-10)
        self.assertAlmostEqual(sum(weight for weight, _ in terms), form.lcu_norm)
        self.assertTrue(all(weight > 0 for weight, _ in terms))


class TestDipoleInput(unittest.TestCase):

    def test_paths_agree(self):
        form = dipoles.dipole_majorana_decompose(random_dipole(2, 3))
        ground = random_state(4, 5)
        direct = dipoles.prepare_dipole_input(ground, form, 'direct')
        for path in ('majorana', 'lcu'):
            other = dipoles.prepare_dipole_input(ground, form, path)
            self.assertAlmostEqual(other.state.fidelity(direct.state), 1.0, places=8)
            self.assertAlmostEqual(other.norm_squared, direct.norm_squared, places=8)
        lcu = dipoles.prepare_dipole_input(ground, form, 'lcu')
        self.assertAlmostEqual(lcu.success_probability,
                               direct.norm_squared / form.lcu_norm ** 2, places=8)

    def test_pauli_operator_lcu(self):
        operator = qpesampling.paulis.PauliOperator({'XZ': 0.5, 'IY': -0.3, 'ZZ': 0.2j})
        ground = random_state(2, 1)
        direct = dipoles.prepare_dipole_input(ground, operator, 'direct')
        lcu = dipoles.prepare_dipole_input(ground, operator, 'lcu')
        self.assertAlmostEqual(lcu.state.fidelity(direct.state), 1.0, places=8)
        self.assertAlmostEqual(lcu.norm_squared, direct.norm_squared, places=8)

    def test_forbidden_transition(self):
        form = dipoles.dipole_majorana_decompose(dipoles.DipoleMatrix('x', [[0, 1.0], [1.0, 0]]))
        for path in dipoles.PATHS:
            result = dipoles.prepare_dipole_input(StateVector.zero(4), form, path)
            self.assertTrue(result.forbidden)
            self.assertIsNone(result.state)

    def test_argument_checks(self):
        form = dipoles.dipole_majorana_decompose(random_dipole(2, 0))
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            dipoles.prepare_dipole_input(StateVector.zero(4), form, 'teleport')
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            dipoles.prepare_dipole_input(StateVector.zero(2), form)
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            dipoles.prepare_dipole_input(StateVector.zero(4), form.to_pauli(), 'majorana')
