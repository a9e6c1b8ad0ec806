"""
Command-line entry point: `qpesampling {spectrum,simulate,qed,fit-discard,compare}`.

Exit codes: 0 success, 1 invalid configuration or incompatible inputs, 2 unreadable
input files, 3 no accepted shots after error detection, 4 a simulation could not run
(for instance a system wider than the dense qubit limit). Runs with several dipole
components derive the seed of component i as seed ^ (i << 20).
"""
import argparse
import logging
import os
import sys

import numpy as np

from . import config as run_config
from . import dipoles
from . import errors
from . import fileio
from . import iceberg
from . import lowering
from . import qpe
from . import results
from . import spectra
from .encoding import amplitude_encode
from .simulator import NoiseModel, StateVector, outcome_distribution, run_shots


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INPUT = 2
EXIT_NO_ACCEPTED = 3
EXIT_EXECUTION = 4

SEED_STRIDE_BITS = 20


def derive_seed(seed, index):
    return seed ^ (index << SEED_STRIDE_BITS)


class SystemInputs(object):
    """The Hamiltonian, reference energy and normalized input states of a run."""

    def __init__(self, hamiltonian, states, e_ref):
        self.hamiltonian = hamiltonian
        self.states = states
        self.e_ref = e_ref

    @property
    def n_system(self):
        return self.hamiltonian.n_qubits


def _read_dipole(path, index, fmt, dipole_path):
    if fmt == 'pauli':
        return fileio.read_pauli_operator(path)
    matrix = dipoles.DipoleMatrix(dipoles.DIRECTIONS[index], fileio.read_tensor(path))
    if dipole_path == 'direct':
        return matrix.to_pauli()
    return dipoles.dipole_majorana_decompose(matrix)


def load_system(config):
    """Read the Hamiltonian, ground state and dipoles; excite the ground state per dipole."""
    hamiltonian = fileio.read_pauli_operator(config['hamiltonian'])
    if 'ground' in config:
        ground = fileio.read_state_vector(config['ground'])
    else:
        energies, vectors = np.linalg.eigh(hamiltonian.to_matrix())
        ground = StateVector(vectors[:, 0], normalize=True)
    e_ref = config.get('e_ref', float(ground.expectation(hamiltonian).real))
    dipole_paths = config.get('dipoles', [])
    if len(dipole_paths) > len(dipoles.DIRECTIONS):
        raise errors.QpeConfigError('At most three dipole components are supported')
    states = []
    for index, path in enumerate(dipole_paths):
        mu = _read_dipole(path, index, config['dipole_format'], config['dipole_path'])
        excited = dipoles.prepare_dipole_input(ground, mu, config['dipole_path'])
        if excited.forbidden:
            logger.warning('Skipping dipole %s: transition forbidden', path)
            continue
        states.append(excited.state)
    if not dipole_paths:
        states.append(ground)
    if not states:
        raise errors.QpeValidationError('Every dipole transition is forbidden')
    logger.info('Loaded %d-qubit system with %d input states, e_ref=%.6g',
                hamiltonian.n_qubits, len(states), e_ref)
    return SystemInputs(hamiltonian, states, e_ref)


def _grid(config, cfg):
    return spectra.spectrum_grid(cfg.omega_min, cfg.omega_max, config['n_omega'])


def _output(config, name):
    os.makedirs(config['out'], exist_ok=True)
    return os.path.join(config['out'], name)


def _write_spectrum(config, series, name='spectrum.csv'):
    return results.write_frame(
        results.spectrum_frame(series, config['shift']), _output(config, name))


def cmd_spectrum(config):
    """Evaluate the analytic readout distribution, optionally sample it, and broaden it."""
    if 'spectrum' in config:
        spec = fileio.read_eigenspectrum(config['spectrum'])
        cfg = config.qpe_config()
    else:
        system = load_system(config)
        spec = qpe.EigenSpectrum.from_hamiltonian(system.hamiltonian, system.states)
        cfg = config.qpe_config(e_ref=system.e_ref)
    pk = qpe.analytic_pk(spec, cfg)
    if config.get('shots'):
        counts = spectra.sample_histogram(pk, config['shots'], np.random.default_rng(config['seed']))
        histogram = results.histogram_frame(counts, cfg.n_q)
        series = spectra.post_process(counts, cfg, config['eta'], _grid(config, cfg))
    else:
        histogram = results.histogram_frame(pk, cfg.n_q)
        histogram['count'] = np.nan
        series = spectra.post_process(pk, cfg, config['eta'], _grid(config, cfg))
    results.write_frame(histogram, _output(config, 'histogram.csv'))
    _write_spectrum(config, series)
    return EXIT_OK


def _qpe_circuit(config, cfg, system, system_prep=None, dynamic=False):
    build = qpe.build_dynamic_qpe_circuit if dynamic else qpe.build_qpe_circuit
    return build(cfg, system.hamiltonian, system_prep, evolution=config['evolution'],
                 trotter_steps=config['trotter_steps'])


def cmd_simulate(config):
    """Run the standard or dynamic QPE circuit shot by shot on every input state."""
    system = load_system(config)
    cfg = config.qpe_config(e_ref=system.e_ref)
    dynamic = config.get('dynamic', False)
    circuit = _qpe_circuit(config, cfg, system, dynamic=dynamic)
    n_ancilla = circuit.n_qubits - system.n_system
    noise = NoiseModel(config['p2'], config.get('p_spam', 0.0))
    counts = np.zeros(cfg.N)
    for index, state in enumerate(system.states):
        hist, _ = run_shots(circuit, StateVector.zero(n_ancilla).tensor(state),
                            config['shots'], noise, derive_seed(config['seed'], index))
        counts += spectra.histogram_counts(hist, cfg.N)
    logger.info('Simulated %d shots per input on %r', config['shots'], circuit)
    results.write_frame(results.histogram_frame(counts, cfg.n_q), _output(config, 'histogram.csv'))
    _write_spectrum(config, spectra.post_process(counts, cfg, config['eta'], _grid(config, cfg)))
    return EXIT_OK


def _readout_distribution(circuit, n_q):
    """Return the exact readout probabilities of a logical circuit started in |0...0>."""
    pk = np.zeros(2 ** n_q)
    for bits, probability in outcome_distribution(
            circuit, StateVector.zero(circuit.n_qubits)).items():
        pk[sum(bit << r for r, bit in enumerate(bits[:n_q]))] += probability
    return pk


def cmd_qed(config):
    """
    Run dynamic QPE with and without the Iceberg code under the same noise.

    Writes the accepted histogram, the per-round discard report, the fitted p2, the
    noiseless, protected and unprotected spectra and a comparison table.
    """
    system = load_system(config)
    cfg = config.qpe_config(e_ref=system.e_ref)
    noise = NoiseModel(config['p2'], config.get('p_spam', 0.0))
    grid = _grid(config, cfg)
    exact = np.zeros(cfg.N)
    protected = np.zeros(cfg.N)
    accepted_hists, unprotected_hists, runs = [], [], []
    for index, state in enumerate(system.states):
        logical = _qpe_circuit(config, cfg, system, amplitude_encode(state), dynamic=True)
        lowered = lowering.lower_to_pauli_rotations(logical)
        exact += _readout_distribution(lowered, cfg.n_q)
        seed = derive_seed(config['seed'], index)
        program = iceberg.compile_logical(lowered, syndrome_period=config.get('syndrome_period'))
        accepted, run_stats = iceberg.run_with_discard(program, noise, config['shots'], seed)
        runs.append(run_stats)
        if run_stats.no_accepted:
            logger.warning('Input state %d has no accepted shots; left out of the QED spectrum',
                           index)
        protected += spectra.histogram_counts(accepted, cfg.N)
        accepted_hists.append(accepted)
        native = lowering.compile_native(lowered)
        hist, _ = run_shots(native, StateVector.zero(native.n_qubits), config['shots'], noise, seed)
        unprotected_hists.append(hist)
    exact /= len(system.states)
    unprotected = spectra.mix_histograms(unprotected_hists, cfg.N)
    results.write_frame(results.histogram_frame(protected, cfg.n_q),
                        _output(config, 'histogram.csv'))
    results.write_frame(results.discard_frame(runs), _output(config, 'discard.csv'))
    _write_fit(config, runs)
    discard_rate = sum(s.shots_discarded for s in runs) / sum(s.shots_total for s in runs)
    reference = spectra.post_process(exact, cfg, config['eta'], grid)
    _write_spectrum(config, reference, 'spectrum_noiseless.csv')
    unprotected_series = spectra.post_process(unprotected, cfg, config['eta'], grid)
    _write_spectrum(config, unprotected_series, 'spectrum_unprotected.csv')
    rows = [{
        'p2': noise.p2, 'discard_rate': 0.0,
        'pk_l2': float(np.linalg.norm(unprotected - exact)),
        'spectrum_l2': spectra.l2_error(unprotected_series, reference), 'qed': False}]
    if all(s.no_accepted for s in runs):
        results.write_frame(results.comparison_frame(rows), _output(config, 'comparison.csv'))
        logger.error('No shot passed error detection (discard rate %.4f)', discard_rate)
        return EXIT_NO_ACCEPTED
    mixed = spectra.mix_histograms(accepted_hists, cfg.N)
    protected_series = spectra.post_process(mixed, cfg, config['eta'], grid)
    _write_spectrum(config, protected_series, 'spectrum_qed.csv')
    rows.insert(0, {
        'p2': noise.p2, 'discard_rate': discard_rate,
        'pk_l2': float(np.linalg.norm(mixed - exact)),
        'spectrum_l2': spectra.l2_error(protected_series, reference), 'qed': True})
    results.write_frame(results.comparison_frame(rows), _output(config, 'comparison.csv'))
    logger.info('Discard rate %.4f over %d two-qubit gates', discard_rate,
                max(s.n_two_qubit for s in runs))
    return EXIT_OK


def _write_fit(config, runs):
    points = [(row.cumulative_n2q, row.discard_rate) for s in runs for row in s.rounds]
    try:
        fit = iceberg.fit_p2(points)
    except errors.QpeValidationError as error:
        logger.warning('Skipping p2 fit: %s', error.errors[0])
        return None
    results.write_frame(results.fit_frame(fit), _output(config, 'fit.csv'))
    return fit


def cmd_fit_discard(config):
    """Fit p2 to (N_2Q, discard rate) points from a discard report."""
    fit = iceberg.fit_p2(results.read_discard_points(config['points']))
    results.write_frame(results.fit_frame(fit), _output(config, 'fit.csv'))
    print('p2 = {:.6g} (residual {:.3g})'.format(fit.p2, fit.residual))
    return EXIT_OK


def cmd_compare(config):
    """Print the ℓ² distance between two spectrum CSVs on the same grid."""
    a = results.read_spectrum(config['spectrum_a'])
    b = results.read_spectrum(config['spectrum_b'])
    print('{:.12g}'.format(spectra.l2_error(a, b)))
    return EXIT_OK


COMMANDS = {
    'spectrum': cmd_spectrum,
    'simulate': cmd_simulate,
    'qed': cmd_qed,
    'fit-discard': cmd_fit_discard,
    'compare': cmd_compare,
}


def _add_common(parser):
    parser.add_argument('--config', help='JSON file of run fields; flags override it')
    parser.add_argument('--seed', type=int, help='top-level random seed')
    parser.add_argument('--out', help='output directory')
    parser.add_argument('--verbose', '-v', action='store_true', help='log pipeline stages')


def _add_qpe(parser):
    parser.add_argument('--nq', type=int, dest='n_q', help='number of readout bits')
    parser.add_argument('--variant', choices=qpe.VARIANTS, help='ancilla input state')
    parser.add_argument('--a', type=float, help='slater decay rate')
    parser.add_argument('--eta', type=float, help='Lorentzian broadening')
    parser.add_argument('--window', type=float, nargs=2, metavar=('MIN', 'MAX'),
                        help='energy window relative to the reference energy')
    parser.add_argument('--e-ref', type=float, dest='e_ref', help='reference energy')
    parser.add_argument('--shift', type=float, help='display offset added to written omega')
    parser.add_argument('--shots', type=int, help='number of shots')
    parser.add_argument('--hamiltonian', help='Pauli operator file')
    parser.add_argument('--dipole', action='append', dest='dipoles',
                        help='dipole component file, once per direction x, y, z')
    parser.add_argument('--dipole-format', choices=run_config.DIPOLE_FORMATS,
                        dest='dipole_format')
    parser.add_argument('--dipole-path', choices=dipoles.PATHS, dest='dipole_path')
    parser.add_argument('--ground', help='ground-state vector file')


def _add_noise(parser):
    parser.add_argument('--p2', type=float, help='two-qubit depolarizing probability')
    parser.add_argument('--p-spam', type=float, dest='p_spam',
                        help='measurement flip probability')
    parser.add_argument('--evolution', choices=qpe.EVOLUTIONS)
    parser.add_argument('--trotter-steps', type=int, dest='trotter_steps')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='qpesampling', description='QPE sampling of absorption spectra')
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    spectrum = subparsers.add_parser('spectrum', help='analytic spectrum from an eigenspectrum')
    _add_common(spectrum)
    _add_qpe(spectrum)
    spectrum.add_argument('--spectrum', help='eigenspectrum file "E w_x [w_y w_z]"')

    simulate = subparsers.add_parser('simulate', help='statevector QPE with finite shots')
    _add_common(simulate)
    _add_qpe(simulate)
    _add_noise(simulate)
    simulate.add_argument('--dynamic', action='store_true', default=None,
                          help='single-ancilla circuit with mid-circuit measurement')

    qed = subparsers.add_parser('qed', help='dynamic QPE with and without error detection')
    _add_common(qed)
    _add_qpe(qed)
    _add_noise(qed)
    qed.add_argument('--syndrome-period', type=int, dest='syndrome_period',
                     help='two-qubit logical rotations between syndrome rounds')

    fit = subparsers.add_parser('fit-discard', help='fit p2 to discard rates')
    _add_common(fit)
    fit.add_argument('points', help='discard report CSV')

    compare = subparsers.add_parser('compare', help='l2 distance between two spectra')
    _add_common(compare)
    compare.add_argument('spectrum_a')
    compare.add_argument('spectrum_b')
    return parser


def _overrides(args):
    overrides = {key: value for key, value in vars(args).items()
                 if key not in ('command', 'config', 'verbose', 'window')}
    if getattr(args, 'window', None):
        overrides['omega_min'], overrides['omega_max'] = args.window
    if args.command in ('fit-discard', 'compare'):
        overrides.pop('seed', None)
    return overrides


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format='%(levelname)s %(name)s: %(message)s')
    try:
        config = run_config.build_run_config(args.command, args.config, **_overrides(args))
        return COMMANDS[args.command](config)
    except errors.QpeInputError as error:
        print(error, file=sys.stderr)
        return EXIT_INPUT
    except errors.QpeValidationError as error:
        print(error, file=sys.stderr)
        return EXIT_CONFIG
    except errors.QpeExecutionError as error:
        print(error, file=sys.stderr)
        return EXIT_EXECUTION


if __name__ == '__main__':
    sys.exit(main())
