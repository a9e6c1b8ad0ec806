from .context import qpesampling
import numpy as np
import os
import shutil
import tempfile
import unittest

fileio = qpesampling.fileio


class TestFileIO(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def path(self, name, content=None):
        path = os.path.join(self.directory, name)
        if content is not None:
            with open(path, 'w') as text_file:
                text_file.write(content)
        return path

    def test_read_pauli_operator(self):
        path = self.path('h.txt', '# hamiltonian\n0.5 0 ZI\n\n-0.25 0.0 XX  # hopping\n0.1 0 ZI\n')
        operator = fileio.read_pauli_operator(path)
        self.assertEqual(operator.n_qubits, 2)
        self.assertAlmostEqual(operator.coefficient('ZI'), 0.6)
        self.assertAlmostEqual(operator.coefficient('XX'), -0.25)

    def test_pauli_operator_written_and_read(self):
        operator = qpesampling.paulis.PauliOperator({'XYZ': 0.125 - 0.5j, 'IIZ': 2.0})
        path = self.path('op.txt')
        fileio.write_pauli_operator(path, operator)
        self.assertTrue(fileio.read_pauli_operator(path).allclose(operator))

    def test_pauli_operator_errors(self):
        cases = {
            'fields.txt': '0.5 ZI\n',
            'number.txt': '0.5 x ZI\n',
            'label.txt': '0.5 0 ZQ\n',
            'widths.txt': '0.5 0 ZI\n1 0 X\n',
            'empty.txt': '# nothing\n',
        }
        for name, content in cases.items():
            with self.assertRaises(qpesampling.errors.QpeInputError) as caught:
                fileio.read_pauli_operator(self.path(name, content))
            self.assertIn(name, str(caught.exception))
        with self.assertRaises(qpesampling.errors.QpeInputError) as caught:
            fileio.read_pauli_operator(self.path('fields2.txt', '0 0 Z\n0.5 ZI\n'))
        self.assertIn('line 2', str(caught.exception))
        with self.assertRaises(qpesampling.errors.QpeInputError):
            fileio.read_pauli_operator(self.path('missing.txt'))

    def test_tensor(self):
        tensor = np.arange(6.0).reshape(2, 3) / 7
        path = self.path('t.txt')
        fileio.write_tensor(path, tensor)
        np.testing.assert_array_equal(fileio.read_tensor(path), tensor)

    def test_tensor_errors(self):
        for content in ('', 'two 2\n', '3 2 2\n', '2 2 2\n1\n2\n3\n', '1 2\n1 2\n',
                        '1 1\n1\n2\n'):
            with self.assertRaises(qpesampling.errors.QpeInputError):
                fileio.read_tensor(self.path('bad.txt', content))

    def test_eigenspectrum(self):
        path = self.path('peaks.txt', '4.71 0.5\n2.3 0.2\n7.2 0.3\n')
        spec = fileio.read_eigenspectrum(path)
        np.testing.assert_allclose(spec.energies, [2.3, 4.71, 7.2])
        out = self.path('copy.txt')
        fileio.write_eigenspectrum(out, spec)
        np.testing.assert_allclose(fileio.read_eigenspectrum(out).weights, spec.weights)

    def test_eigenspectrum_polarizations(self):
        spec = fileio.read_eigenspectrum(self.path('xyz.txt', '1 1 0 0.5\n2 0 1 0.5\n'))
        self.assertEqual(spec.n_polarizations, 3)

    def test_eigenspectrum_errors(self):
        for content in ('1.0\n', '1 0.5\n2 0.25 0.25\n', '1 0.5\n2 0.2\n', ''):
            with self.assertRaises(qpesampling.errors.QpeInputError):
                fileio.read_eigenspectrum(self.path('bad.txt', content))

    def test_state_vector(self):
        state = qpesampling.simulator.StateVector([0.6, 0.8j])
        path = self.path('psi.txt')
        fileio.write_state_vector(path, state)
        np.testing.assert_allclose(fileio.read_state_vector(path).amplitudes, state.amplitudes)

    def test_state_vector_errors(self):
        for content in ('1\n', '1 0\n0 0\n0 0\n', '1 0\n1 0\n'):
            with self.assertRaises(qpesampling.errors.QpeInputError):
                fileio.read_state_vector(self.path('bad.txt', content))
