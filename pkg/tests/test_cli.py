from .context import qpesampling
from io import StringIO
import json
import mock
import numpy as np
import os
import pandas as pd
import shutil
import tempfile
import unittest

cli = qpesampling.cli

HAMILTONIAN = '0.5 0 ZI\n0.3 0 IX\n0.2 0 XX\n-0.4 0 IZ\n'

PEAKS = '2.3 0.2\n4.71 0.5\n7.2 0.3\n'


class TestCommandLine(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()
        self.peaks = self.write('peaks.txt', PEAKS)
        self.hamiltonian = self.write('h.txt', HAMILTONIAN)
        self.dipole = self.write('mu_x.txt', '1.0 0 IX\n0.5 0 ZI\n')

    def tearDown(self):
        shutil.rmtree(self.directory)

    def write(self, name, content):
        path = os.path.join(self.directory, name)
        with open(path, 'w') as text_file:
            text_file.write(content)
        return path

    def out(self, name):
        return os.path.join(self.directory, name)

    def run_quietly(self, argv):
        with mock.patch('sys.stdout', new_callable=StringIO) as stdout:
            with mock.patch('sys.stderr', new_callable=StringIO) as stderr:
                code = cli.main(argv)
        return code, stdout.getvalue(), stderr.getvalue()

    def spectrum_args(self, *extra):
        return ['spectrum', '--spectrum', self.peaks, '--nq', '5', '--window', '0', '10',
                '--out', self.out('run')] + list(extra)

    def system_args(self, command, *extra):
        return [command, '--hamiltonian', self.hamiltonian, '--dipole', self.dipole,
                '--nq', '2', '--window', '-0.5', '3.5', '--shots', '12',
                '--out', self.out(command)] + list(extra)

    def test_spectrum_without_shots(self):
        self.assertEqual(cli.main(self.spectrum_args()), cli.EXIT_OK)
        histogram = pd.read_csv(self.out('run/histogram.csv'))
        self.assertEqual(len(histogram), 32)
        self.assertTrue(histogram['count'].isnull().all())
        self.assertAlmostEqual(histogram['probability'].sum(), 1.0)
        spectrum = pd.read_csv(self.out('run/spectrum.csv'))
        self.assertEqual(len(spectrum), 1024)
        self.assertAlmostEqual(spectrum['intensity'].sum(), 1.0, places=6)

    def test_spectrum_with_shots_is_deterministic(self):
        self.assertEqual(cli.main(self.spectrum_args('--shots', '200', '--seed', '9')), 0)
        with open(self.out('run/histogram.csv')) as first:
            expected = first.read()
        self.assertEqual(cli.main(self.spectrum_args('--shots', '200', '--seed', '9')), 0)
        with open(self.out('run/histogram.csv')) as second:
            self.assertEqual(second.read(), expected)
        self.assertEqual(pd.read_csv(self.out('run/histogram.csv'))['count'].sum(), 200)

    def test_spectrum_shift_only_moves_grid(self):
        self.assertEqual(cli.main(self.spectrum_args('--shift', '100')), 0)
        spectrum = pd.read_csv(self.out('run/spectrum.csv'))
        self.assertAlmostEqual(spectrum['omega'].iloc[0], 100.0)

    def test_config_file_with_flag_override(self):
        config = self.write('run.json', json.dumps({
            'spectrum': self.peaks, 'n_q': 3, 'omega_min': 0, 'omega_max': 10,
            'out': self.out('from_config')}))
        self.assertEqual(cli.main(['spectrum', '--config', config, '--nq', '4']), 0)
        self.assertEqual(len(pd.read_csv(self.out('from_config/histogram.csv'))), 16)

    def test_missing_input_file(self):
        code, _, stderr = self.run_quietly(
            ['spectrum', '--spectrum', self.out('nope.txt'), '--nq', '3', '--window', '0', '1',
             '--out', self.out('run')])
        self.assertEqual(code, cli.EXIT_INPUT)
        self.assertIn('nope.txt', stderr)

    def test_invalid_configuration(self):
        code, _, _ = self.run_quietly(
            ['spectrum', '--spectrum', self.peaks, '--nq', '3', '--out', self.out('run')])
        self.assertEqual(code, cli.EXIT_CONFIG)
        code, _, _ = self.run_quietly(self.spectrum_args('--variant', 'slater', '--eta', '-1'))
        self.assertEqual(code, cli.EXIT_CONFIG)

    def test_simulate(self):
        self.assertEqual(cli.main(self.system_args('simulate', '--seed', '3')), 0)
        histogram = pd.read_csv(self.out('simulate/histogram.csv'))
        self.assertEqual(histogram['count'].sum(), 12)
        self.assertTrue(os.path.exists(self.out('simulate/spectrum.csv')))

    def test_simulate_beyond_dense_limit(self):
        with qpesampling.context.dense_limit_context(1):
            code, _, stderr = self.run_quietly(self.system_args('simulate'))
        self.assertEqual(code, cli.EXIT_EXECUTION)
        self.assertIn('Dense limit exceeded', stderr)

    def test_simulate_dynamic(self):
        self.assertEqual(cli.main(self.system_args('simulate', '--dynamic')), 0)
        self.assertEqual(pd.read_csv(self.out('simulate/histogram.csv'))['count'].sum(), 12)

    def test_simulate_dynamic_epe_rejected(self):
        code, _, stderr = self.run_quietly(
            self.system_args('simulate', '--dynamic', '--variant', 'epe'))
        self.assertEqual(code, cli.EXIT_CONFIG)
        self.assertIn('entangled', stderr)

    def test_qed(self):
        self.assertEqual(cli.main(self.system_args('qed', '--seed', '5')), 0)
        for name in ('histogram.csv', 'discard.csv', 'fit.csv', 'spectrum_noiseless.csv',
                     'spectrum_unprotected.csv', 'spectrum_qed.csv', 'comparison.csv'):
            self.assertTrue(os.path.exists(self.out(os.path.join('qed', name))), name)
        comparison = pd.read_csv(self.out('qed/comparison.csv'))
        self.assertEqual(list(comparison['qed']), [True, False])
        self.assertEqual(comparison['discard_rate'].iloc[0], 0.0)
        discard = pd.read_csv(self.out('qed/discard.csv'))
        self.assertTrue((discard['discard_rate'] == 0).all())

    def test_noisy_qed_is_reproducible(self):
        args = self.system_args('qed', '--p2', '0.005', '--shots', '100', '--seed', '4')
        self.assertEqual(cli.main(args), cli.EXIT_OK)
        with open(self.out('qed/comparison.csv')) as first:
            expected = first.read()
        self.assertEqual(cli.main(args), cli.EXIT_OK)
        with open(self.out('qed/comparison.csv')) as second:
            self.assertEqual(second.read(), expected)
        comparison = pd.read_csv(self.out('qed/comparison.csv'))
        self.assertEqual(list(comparison['qed']), [True, False])
        self.assertGreater(comparison['discard_rate'].iloc[0], 0.0)
        self.assertGreater(comparison['pk_l2'].iloc[1], 0.0)

    def test_qed_without_accepted_shots(self):
        stats = qpesampling.iceberg.DiscardStats(12, 12, [], 100)
        with mock.patch('qpesampling.iceberg.run_with_discard', return_value=({}, stats)):
            code, _, _ = self.run_quietly(self.system_args('qed', '--p2', '0.5'))
        self.assertEqual(code, cli.EXIT_NO_ACCEPTED)
        self.assertFalse(os.path.exists(self.out('qed/spectrum_qed.csv')))
        self.assertEqual(len(pd.read_csv(self.out('qed/comparison.csv'))), 1)

    def qed_spectrum_with_accepted(self, first, second):
        stats = [qpesampling.iceberg.DiscardStats(12, 12 - sum(hist.values()), [], 100)
                 for hist in (first, second)]
        with mock.patch('qpesampling.iceberg.run_with_discard',
                        side_effect=[(first, stats[0]), (second, stats[1])]):
            code, _, _ = self.run_quietly(self.system_args('qed', '--dipole', self.dipole))
        self.assertEqual(code, cli.EXIT_OK)
        return pd.read_csv(self.out('qed/spectrum_qed.csv'))['intensity'].values

    def test_qed_weights_input_states_equally(self):
        uneven = self.qed_spectrum_with_accepted({'00': 1}, {'11': 9})
        even = self.qed_spectrum_with_accepted({'00': 5}, {'11': 5})
        np.testing.assert_allclose(uneven, even)

    def test_fit_discard(self):
        points = self.out('points.csv')
        pd.DataFrame({
            'n2q': [100, 400, 900],
            'discard_rate': [qpesampling.iceberg.discard_model(n, 2.4e-3) for n in (100, 400, 900)],
        }).to_csv(points, index=False)
        code, stdout, _ = self.run_quietly(['fit-discard', points, '--out', self.out('fit')])
        self.assertEqual(code, 0)
        self.assertIn('p2 = 0.0024', stdout)
        fit = pd.read_csv(self.out('fit/fit.csv'))
        self.assertAlmostEqual(fit['p2'].iloc[0], 2.4e-3)

    def test_compare(self):
        self.assertEqual(cli.main(self.spectrum_args()), 0)
        spectrum = self.out('run/spectrum.csv')
        code, stdout, _ = self.run_quietly(['compare', spectrum, spectrum])
        self.assertEqual(code, 0)
        self.assertEqual(float(stdout), 0.0)

        other = self.out('other.csv')
        frame = pd.read_csv(spectrum)
        frame['omega'] = frame['omega'] * 2
        frame.to_csv(other, index=False)
        code, _, _ = self.run_quietly(['compare', spectrum, other])
        self.assertEqual(code, cli.EXIT_CONFIG)

    def test_derive_seed(self):
        self.assertEqual(cli.derive_seed(7, 0), 7)
        self.assertEqual(cli.derive_seed(7, 2), 7 ^ (2 << 20))

    def test_forbidden_dipoles_only(self):
        vacuum = self.write('vacuum.txt', '1 0\n0 0\n0 0\n0 0\n')
        number = self.write('mu_number.txt', '0.5 0 II\n-0.5 0 IZ\n')
        code, _, _ = self.run_quietly(
            ['spectrum', '--hamiltonian', self.hamiltonian, '--dipole', number,
             '--ground', vacuum, '--nq', '2', '--window', '0', '1', '--out', self.out('run')])
        self.assertEqual(code, cli.EXIT_CONFIG)
