from .context import qpesampling
from hypothesis import given, settings, strategies as st
import math
import numpy as np
import unittest

qpe = qpesampling.qpe
simulator = qpesampling.simulator
PauliOperator = qpesampling.paulis.PauliOperator
StateVector = simulator.StateVector

offsets = st.floats(min_value=-7.9, max_value=7.9, allow_nan=False)


def small_hamiltonian():
    return PauliOperator({'II': 1.0, 'ZI': 0.7, 'IX': 0.4, 'XX': 0.3})


def input_state():
    return StateVector([0.6, 0.3j, -0.5, 0.2 + 0.4j], normalize=True)


def readout_distribution(circuit, state, n_q):
    """Return exact P_k from a circuit whose classical bit m carries bit m of k."""
    probabilities = np.zeros(2 ** n_q)
    for bits, weight in simulator.outcome_distribution(circuit, state).items():
        probabilities[simulator.bits_to_int(bits)] += weight
    return probabilities


class TestQpeConfig(unittest.TestCase):

    def test_derived_quantities(self):
        cfg = qpe.QpeConfig(4, 0.0, 10.0, e_ref=2.0)
        self.assertEqual(cfg.N, 16)
        self.assertAlmostEqual(cfg.t0, 1.6)
        self.assertEqual(cfg.phase_reference, 2.0)
        np.testing.assert_allclose(cfg.bin_energies()[:2], [0.0, 0.625])

    def test_collects_problems(self):
        with self.assertRaises(qpesampling.errors.QpeConfigError) as caught:
            qpe.QpeConfig(0, 1.0, 1.0, variant='slater')
        self.assertEqual(len(caught.exception.errors), 3)
        with self.assertRaises(qpesampling.errors.QpeConfigError):
            qpe.QpeConfig(3, 0.0, 1.0, variant='gaussian')

    def test_replace(self):
        cfg = qpe.QpeConfig(4, 0.0, 10.0)
        self.assertEqual(cfg.replace(variant='slater', a=0.1).a, 0.1)
        self.assertNotEqual(cfg.replace(n_q=5), cfg)

    def test_decay_rate_for_broadening(self):
        self.assertAlmostEqual(qpe.decay_rate_for_broadening(0.3, 10.0), 0.06 * math.pi)


class TestEigenSpectrum(unittest.TestCase):

    def test_sorted_and_validated(self):
        spec = qpe.EigenSpectrum([4.71, 2.3, 7.2], [0.5, 0.2, 0.3])
        np.testing.assert_allclose(spec.energies, [2.3, 4.71, 7.2])
        np.testing.assert_allclose(spec.weights[:, 0], [0.2, 0.5, 0.3])
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            qpe.EigenSpectrum([1.0, 2.0], [0.5, 0.6])
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            qpe.EigenSpectrum([1.0, 2.0], [1.5, -0.5])
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            qpe.EigenSpectrum([1.0], [0.5, 0.5])

    def test_from_hamiltonian(self):
        spec = qpe.EigenSpectrum.from_hamiltonian(small_hamiltonian(), [input_state()])
        self.assertEqual(len(spec), 4)
        self.assertAlmostEqual(spec.weights.sum(), 1.0)
        np.testing.assert_allclose(spec.shifted(1.0).energies, spec.energies + 1.0)


class TestAlpha(unittest.TestCase):

    def test_uniform_is_a_kronecker_delta_on_integers(self):
        values = np.abs(qpe.alpha_uniform(np.arange(16), 4)) ** 2
        self.assertAlmostEqual(values[0], 1.0)
        np.testing.assert_allclose(values[1:], 0, atol=1e-12)

    def test_epe_peak_weight(self):
        peak = abs(qpe.alpha_epe(0.0, 10)) ** 2
        self.assertAlmostEqual(float(peak), 8 / math.pi ** 2, delta=1e-3)

    @given(offsets)
    @settings(max_examples=40, deadline=None)
    def test_closed_forms_match_sums(self, x):
        np.testing.assert_allclose(qpe.alpha_uniform(x, 4, closed_form=True),
                                   qpe.alpha_uniform(x, 4), atol=1e-9)
        np.testing.assert_allclose(qpe.alpha_epe(x, 4, closed_form=True),
                                   qpe.alpha_epe(x, 4), atol=1e-9)
        np.testing.assert_allclose(qpe.alpha_slater(x, 4, 0.2, method='closed'),
                                   qpe.alpha_slater(x, 4, 0.2), atol=1e-9)

    def test_closed_forms_at_singular_points(self):
        xs = np.array([0.0, 0.5, -0.5, 16.0])
        np.testing.assert_allclose(qpe.alpha_uniform(xs, 4, closed_form=True),
                                   qpe.alpha_uniform(xs, 4), atol=1e-9)
        np.testing.assert_allclose(qpe.alpha_epe(xs, 4, closed_form=True),
                                   qpe.alpha_epe(xs, 4), atol=1e-9)

    def test_lorentzian_approximation_near_peak(self):
        a = 0.01
        exact = qpe.alpha_slater(0.0, 10, a)
        approximate = qpe.alpha_slater(0.0, 10, a, method='lorentzian')
        self.assertAlmostEqual(abs(approximate) / abs(exact), 1.0, delta=0.01)
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            qpe.alpha_slater(0.0, 4, a, method='pade')

    @given(st.sampled_from(qpe.VARIANTS), st.integers(min_value=1, max_value=5))
    @settings(max_examples=20, deadline=None)
    def test_probabilities_sum_to_one_over_readouts(self, variant, n_q):
        cfg = qpe.QpeConfig(n_q, 0.0, 1.0, variant=variant, a=0.3)
        x = 0.37 - np.arange(cfg.N)
        self.assertAlmostEqual(float(np.sum(np.abs(qpe.alpha(x, cfg)) ** 2)), 1.0)

    def test_fold(self):
        np.testing.assert_allclose(qpe.fold([0, 7.9, 8, -9], 16), [0, 7.9, -8, 7])


class TestQpeCircuits(unittest.TestCase):

    def test_qft_is_dft(self):
        N = 8
        expected = np.exp(2j * math.pi * np.outer(np.arange(N), np.arange(N)) / N) / math.sqrt(N)
        np.testing.assert_allclose(simulator.circuit_unitary(qpe.qft_circuit(3)), expected,
                                   atol=1e-10)

    def test_ancilla_preparations(self):
        for variant, a in (('uniform', None), ('epe', None), ('slater', 0.4)):
            cfg = qpe.QpeConfig(3, 0.0, 1.0, variant=variant, a=a)
            prepared = simulator.run_unitary(qpe.prepare_ancilla(cfg), StateVector.zero(3))
            expected = StateVector(qpe.ancilla_amplitudes(variant, 3, a))
            self.assertAlmostEqual(prepared.fidelity(expected), 1.0, places=10)
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            qpe.prepare_slater(3, 0.0)

    def test_analytic_pk_matches_simulation(self):
        h = small_hamiltonian()
        state = input_state()
        spec = qpe.EigenSpectrum.from_hamiltonian(h, [state])
        for variant in qpe.VARIANTS:
            cfg = qpe.QpeConfig(3, -1.0, 4.0, variant=variant, a=0.5, e_ref=0.2)
            circuit = qpe.build_qpe_circuit(
                cfg, h, system_prep=qpesampling.encoding.amplitude_encode(state))
            simulated = readout_distribution(circuit, StateVector.zero(5), cfg.n_q)
            np.testing.assert_allclose(simulated, qpe.analytic_pk(spec, cfg), atol=1e-9)

    def test_bin_centered_eigenvalue_is_exact(self):
        cfg = qpe.QpeConfig(3, 0.0, 8.0)
        np.testing.assert_allclose(qpe.analytic_pk(qpe.EigenSpectrum([3.0], [1.0]), cfg),
                                   np.eye(8)[3], atol=1e-12)

    def test_polarization_average(self):
        spec = qpe.EigenSpectrum([1.0, 3.0], [[1.0, 0.0], [0.0, 1.0]])
        cfg = qpe.QpeConfig(2, 0.0, 4.0)
        np.testing.assert_allclose(qpe.analytic_pk(spec, cfg), [0, 0.5, 0, 0.5], atol=1e-12)
        np.testing.assert_allclose(qpe.analytic_pk(spec, cfg, polarization=1), [0, 0, 0, 1],
                                   atol=1e-12)

    def test_dynamic_matches_standard(self):
        h = small_hamiltonian()
        state = input_state()
        prep = qpesampling.encoding.amplitude_encode(state)
        for variant in ('uniform', 'slater'):
            cfg = qpe.QpeConfig(3, -1.0, 4.0, variant=variant, a=0.5)
            standard = readout_distribution(
                qpe.build_qpe_circuit(cfg, h, system_prep=prep), StateVector.zero(5), 3)
            dynamic_circuit = qpe.build_dynamic_qpe_circuit(cfg, h, system_prep=prep)
            self.assertEqual(dynamic_circuit.n_qubits, 3)
            self.assertTrue(dynamic_circuit.is_dynamic())
            dynamic = readout_distribution(dynamic_circuit, StateVector.zero(3), 3)
            np.testing.assert_allclose(dynamic, standard, atol=1e-9)

    def test_dynamic_rejects_epe(self):
        cfg = qpe.QpeConfig(3, 0.0, 4.0, variant='epe')
        with self.assertRaises(qpesampling.errors.QpeConfigError) as caught:
            qpe.build_dynamic_qpe_circuit(cfg, small_hamiltonian())
        self.assertIn('entangled', str(caught.exception))

    def test_pauli_evolution_matches_exact_for_commuting_terms(self):
        h = PauliOperator({'II': 0.3, 'ZI': 0.9, 'ZZ': -0.4})
        state = StateVector([0.5, 0.5, 0.5, 0.5])
        cfg = qpe.QpeConfig(3, -2.0, 2.0)
        prep = qpesampling.encoding.amplitude_encode(state)
        exact = readout_distribution(
            qpe.build_qpe_circuit(cfg, h, system_prep=prep), StateVector.zero(5), 3)
        pauli = readout_distribution(
            qpe.build_qpe_circuit(cfg, h, system_prep=prep, evolution='pauli'),
            StateVector.zero(5), 3)
        np.testing.assert_allclose(pauli, exact, atol=1e-9)

    def test_evolution_arguments_checked(self):
        cfg = qpe.QpeConfig(2, 0.0, 1.0)
        with self.assertRaises(qpesampling.errors.QpeValidationError) as caught:
            qpe.build_qpe_circuit(cfg, small_hamiltonian(), evolution='magnus', trotter_steps=0)
        self.assertEqual(len(caught.exception.errors), 2)
        with self.assertRaises(qpesampling.errors.QpeValidationError):
            qpe.build_qpe_circuit(cfg, small_hamiltonian(),
                                  system_prep=qpesampling.circuits.Circuit(3))
