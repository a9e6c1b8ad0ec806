"""
QPE sampling circuits, ancilla input states and the analytic outcome distribution.

Ancilla m controls U^{2^m} with U = exp(+2πi t₀ (H - ω_ref) / N_q) and
ω_ref = e_ref + ω_min; after the inverse QFT the readout integer k = Σ_m b_m 2^m
labels the energy ω_min + k / t₀ (relative to e_ref).
"""
import logging
import math

import numpy as np

from . import errors
from . import evolution
from .circuits import Circuit
from .gates import controlled
from .paulis import PauliOperator


logger = logging.getLogger(__name__)

UNIFORM = 'uniform'
EPE = 'epe'
SLATER = 'slater'
VARIANTS = (UNIFORM, EPE, SLATER)

EVOLUTIONS = ('exact', 'pauli')

WEIGHT_TOLERANCE = 1e-10

SINGULAR_TOLERANCE = 1e-9


class QpeConfig(object):
    """Ancilla count, energy window and input-state variant of a QPE sampling run."""

    def __init__(self, n_q, omega_min, omega_max, variant=UNIFORM, a=None, e_ref=0.0):
        """Validate the configuration, collecting every problem."""
        problems = []
        if not isinstance(n_q, (int, np.integer)) or n_q < 1:
            problems.append('n_q must be a positive integer, found {!r}'.format(n_q))
        if not omega_max > omega_min:
            problems.append('Energy window is degenerate: omega_min={} omega_max={}'.format(
                omega_min, omega_max))
        if variant not in VARIANTS:
            problems.append('variant must be one of {}, found {!r}'.format(VARIANTS, variant))
        if variant == SLATER and a is None:
            problems.append('The slater variant needs a decay rate a')
        if a is not None and not a > 0:
            problems.append('Decay rate a must be positive, found {!r}'.format(a))
        if problems:
            raise errors.QpeConfigError(problems)
        self.n_q = int(n_q)
        self.omega_min = float(omega_min)
        self.omega_max = float(omega_max)
        self.variant = variant
        self.a = None if a is None else float(a)
        self.e_ref = float(e_ref)

    @property
    def N(self):
        return 2 ** self.n_q

    @property
    def window(self):
        return self.omega_max - self.omega_min

    @property
    def t0(self):
        """Energy-to-phase scale N_q / (ω_max - ω_min)."""
        return self.N / self.window

    @property
    def phase_reference(self):
        return self.e_ref + self.omega_min

    def bin_energies(self):
        """Return ω_min + k / t₀ for every readout k."""
        return self.omega_min + np.arange(self.N) / self.t0

    def replace(self, **changes):
        fields = dict(n_q=self.n_q, omega_min=self.omega_min, omega_max=self.omega_max,
                      variant=self.variant, a=self.a, e_ref=self.e_ref)
        fields.update(changes)
        return QpeConfig(**fields)

    def __eq__(self, other):
        return isinstance(other, QpeConfig) and vars(self) == vars(other)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return ('QpeConfig(n_q={n_q}, omega_min={omega_min}, omega_max={omega_max}, '
                'variant={variant!r}, a={a}, e_ref={e_ref})'.format(**vars(self)))


def decay_rate_for_broadening(eta, window):
    """Return the Slater decay rate a = 2πη / window matching a Lorentzian width η."""
    return 2 * math.pi * eta / window


class EigenSpectrum(object):
    """
    Eigenenergies with overlap weights |c_j|², one column per polarization.

    Each column must sum to one; energies are stored in ascending order.
    """

    def __init__(self, energies, weights, polarizations=None):
        """Sort by energy and check that each weight column is a probability vector."""
        energies = np.asarray(energies, dtype=float).reshape(-1)
        weights = np.asarray(weights, dtype=float)
        if weights.ndim == 1:
            weights = weights[:, None]
        problems = []
        if weights.shape[0] != len(energies):
            problems.append('Found {} energies but {} weight rows'.format(
                len(energies), weights.shape[0]))
        elif np.any(weights < 0):
            problems.append('Overlap weights must be non-negative')
        elif not np.allclose(weights.sum(axis=0), 1, atol=WEIGHT_TOLERANCE, rtol=0):
            problems.append('Overlap weights must sum to one per polarization, found {}'.format(
                weights.sum(axis=0)))
        if problems:
            raise errors.QpeValidationError(problems)
        order = np.argsort(energies, kind='stable')
        self.energies = energies[order]
        self.weights = weights[order]
        self.polarizations = list(polarizations or range(weights.shape[1]))

    @classmethod
    def from_hamiltonian(cls, h, input_states, polarizations=None):
        """Diagonalize H and project each normalized input state onto the eigenbasis."""
        energies, vectors = np.linalg.eigh(h.to_matrix())
        columns = []
        for state in input_states:
            amplitudes = getattr(state, 'amplitudes', state)
            columns.append(np.abs(vectors.conj().T @ amplitudes) ** 2)
        return cls(energies, np.column_stack(columns), polarizations)

    @property
    def n_polarizations(self):
        return self.weights.shape[1]

    def shifted(self, offset):
        return EigenSpectrum(self.energies + offset, self.weights, self.polarizations)

    def __len__(self):
        return len(self.energies)

    def __repr__(self):
        return 'EigenSpectrum(n_states={}, n_polarizations={})'.format(
            len(self), self.n_polarizations)


def slater_angles(n_q, a):
    """Return θ_m = arctan(exp(-2^m a)) for every ancilla."""
    return [math.atan(math.exp(-(2 ** m) * a)) for m in range(n_q)]


def prepare_uniform(n_q):
    circuit = Circuit(n_q, name='prepare_uniform')
    for m in range(n_q):
        circuit.h(m)
    return circuit


def qft_circuit(n_q):
    """
    Quantum Fourier transform |x> -> N^{-1/2} Σ_y e^{2πixy/N} |y>.

    Built from Hadamards and controlled phases, followed by the bit-reversal swaps.
    """
    circuit = Circuit(n_q, name='qft')
    for j in reversed(range(n_q)):
        circuit.h(j)
        for k in reversed(range(j)):
            circuit.cp(math.pi * 2.0 ** (k - j), j, k)
    for i in range(n_q // 2):
        circuit.swap(i, n_q - 1 - i)
    return circuit


def iqft_circuit(n_q):
    circuit = qft_circuit(n_q).inverse()
    circuit.name = 'iqft'
    return circuit


def prepare_epe(n_q):
    """Sine-profile input √(2/N) Σ_τ sin(π(τ + 1/2)/N) |τ> with real amplitudes."""
    N = 2 ** n_q
    circuit = Circuit(n_q, name='prepare_epe')
    circuit.h(0)
    circuit.rz(math.pi / N - math.pi, 0)
    circuit.compose(qft_circuit(n_q))
    for m in range(n_q):
        circuit.p(-math.pi * 2 ** m / N, m)
    return circuit


def prepare_slater(n_q, a):
    """Product input with amplitudes C_S e^{-aτ}."""
    if not a > 0:
        raise errors.QpeValidationError('Decay rate a must be positive, found {!r}'.format(a))
    circuit = Circuit(n_q, name='prepare_slater')
    for m, theta in enumerate(slater_angles(n_q, a)):
        circuit.ry(2 * theta, m)
    return circuit


def prepare_ancilla(cfg):
    if cfg.variant == UNIFORM:
        return prepare_uniform(cfg.n_q)
    if cfg.variant == EPE:
        return prepare_epe(cfg.n_q)
    return prepare_slater(cfg.n_q, cfg.a)


def ancilla_amplitudes(variant, n_q, a=None):
    """Return the exact ancilla input amplitudes β_τ."""
    N = 2 ** n_q
    tau = np.arange(N)
    if variant == UNIFORM:
        return np.full(N, N ** -0.5)
    if variant == EPE:
        return math.sqrt(2 / N) * np.sin(math.pi * (tau + 0.5) / N)
    if variant == SLATER:
        return slater_normalization(n_q, a) * np.exp(-a * tau)
    raise errors.QpeValidationError('Unknown variant {!r}'.format(variant))


def slater_normalization(n_q, a):
    """Return C_S = sqrt((1 - e^{-2a}) / (1 - e^{-2aN}))."""
    N = 2 ** n_q
    return math.sqrt(-math.expm1(-2 * a) / -math.expm1(-2 * a * N))


def shifted_hamiltonian(h, cfg):
    return h - PauliOperator.identity(h.n_qubits, cfg.phase_reference)


def _check_system_prep(h, system_prep):
    if system_prep is not None and system_prep.n_qubits > h.n_qubits:
        raise errors.QpeValidationError(
            'System preparation acts on {} qubits but the Hamiltonian on {}'.format(
                system_prep.n_qubits, h.n_qubits))


def _controlled_power(h, cfg, power, control, system, n_qubits, evolution_kind, trotter_steps):
    t = cfg.t0 * power / cfg.N
    if evolution_kind == 'exact':
        circuit = Circuit(n_qubits)
        return circuit.append(controlled(evolution.exact_evolution_gate(h, t, system), control))
    return evolution.controlled_pauli_evolution(
        h, t, control, system, steps=trotter_steps, n_qubits=n_qubits)


def _check_evolution(evolution_kind, trotter_steps):
    problems = []
    if evolution_kind not in EVOLUTIONS:
        problems.append('evolution must be one of {}, found {!r}'.format(
            EVOLUTIONS, evolution_kind))
    if trotter_steps < 1:
        problems.append('trotter_steps must be at least 1, found {}'.format(trotter_steps))
    if problems:
        raise errors.QpeValidationError(problems)


def build_qpe_circuit(cfg, h, system_prep=None, evolution='exact', trotter_steps=1):
    """
    Build the QPE sampling circuit.

    System qubits are 0..n_s-1 and ancilla m is qubit n_s + m; ancilla m is measured
    into classical bit m.
    """
    _check_evolution(evolution, trotter_steps)
    _check_system_prep(h, system_prep)
    n_s = h.n_qubits
    n_qubits = n_s + cfg.n_q
    system = list(range(n_s))
    ancillas = list(range(n_s, n_qubits))
    shifted = shifted_hamiltonian(h, cfg)
    circuit = Circuit(n_qubits, cfg.n_q, name='qpe_{}'.format(cfg.variant))
    if system_prep is not None:
        circuit.compose(system_prep, qubits=system[:system_prep.n_qubits])
    circuit.compose(prepare_ancilla(cfg), qubits=ancillas)
    for m, ancilla in enumerate(ancillas):
        circuit.compose(_controlled_power(
            shifted, cfg, 2 ** m, ancilla, system, n_qubits, evolution, trotter_steps))
    circuit.compose(iqft_circuit(cfg.n_q), qubits=ancillas)
    for m, ancilla in enumerate(ancillas):
        circuit.measure(ancilla, m)
    logger.debug('Built %r with %d two-qubit gates', circuit, circuit.n_two_qubit)
    return circuit


def _prepare_single_ancilla(circuit, cfg, m, ancilla):
    if cfg.variant == UNIFORM:
        circuit.h(ancilla)
    else:
        circuit.ry(2 * slater_angles(cfg.n_q, cfg.a)[m], ancilla)


def build_dynamic_qpe_circuit(cfg, h, system_prep=None, evolution='exact', trotter_steps=1):
    """
    Build semiclassical QPE on a single ancilla (qubit n_s).

    Round r applies U^{2^{n_q-1-r}}, removes the phase of the bits already read with
    classically controlled P(-π/2^{r-j}), then measures bit r into classical bit r and
    resets the ancilla.
    """
    if cfg.variant == EPE:
        raise errors.QpeConfigError(
            'The epe input state is entangled across ancillas and cannot be prepared one '
            'ancilla at a time; use the standard circuit or a product-form variant')
    _check_evolution(evolution, trotter_steps)
    _check_system_prep(h, system_prep)
    n_s = h.n_qubits
    n_qubits = n_s + 1
    ancilla = n_s
    system = list(range(n_s))
    shifted = shifted_hamiltonian(h, cfg)
    circuit = Circuit(n_qubits, cfg.n_q, name='dynamic_qpe_{}'.format(cfg.variant))
    if system_prep is not None:
        circuit.compose(system_prep, qubits=system[:system_prep.n_qubits])
    for r in range(cfg.n_q):
        m = cfg.n_q - 1 - r
        _prepare_single_ancilla(circuit, cfg, m, ancilla)
        circuit.compose(_controlled_power(
            shifted, cfg, 2 ** m, ancilla, system, n_qubits, evolution, trotter_steps))
        for j in range(r):
            circuit.p(-math.pi / 2 ** (r - j), ancilla, condition=(j, 1))
        circuit.h(ancilla)
        circuit.measure(ancilla, r)
        circuit.reset(ancilla)
    return circuit


def _alpha_sum(x, betas):
    N = len(betas)
    x = np.asarray(x, dtype=float)
    tau = np.arange(N)
    phases = np.exp(2j * math.pi * np.multiply.outer(x, tau) / N)
    return phases @ betas / math.sqrt(N)


def _closed_with_fallback(x, closed, denominator, exact):
    x = np.asarray(x, dtype=float)
    singular = np.abs(denominator(x)) < SINGULAR_TOLERANCE
    safe = np.where(singular, 0.5, x)
    with np.errstate(divide='ignore', invalid='ignore'):
        values = closed(safe)
    if np.any(singular):
        values = np.where(singular, exact(x), values)
    return values


def alpha_uniform(x, n_q, closed_form=False):
    """α(x) for the uniform input; closed_form evaluates the geometric-sum ratio."""
    N = 2 ** n_q

    def exact(xs):
        return _alpha_sum(xs, ancilla_amplitudes(UNIFORM, n_q))

    if not closed_form:
        return exact(x)

    def closed(xs):
        return (np.exp(1j * math.pi * xs * (N - 1) / N) * np.sin(math.pi * xs)
                / (N * np.sin(math.pi * xs / N)))

    return _closed_with_fallback(x, closed, lambda xs: np.sin(math.pi * xs / N), exact)


def alpha_epe(x, n_q, closed_form=False):
    """α(x) for the sine-profile input."""
    N = 2 ** n_q

    def exact(xs):
        return _alpha_sum(xs, ancilla_amplitudes(EPE, n_q))

    if not closed_form:
        return exact(x)

    def closed(xs):
        return (-np.exp(1j * math.pi * xs * (N - 1) / N) * (math.sqrt(2) / N)
                * np.cos(math.pi * xs) * np.cos(math.pi * xs / N) * math.sin(math.pi / (2 * N))
                / (np.sin(math.pi * (xs + 0.5) / N) * np.sin(math.pi * (xs - 0.5) / N)))

    def denominator(xs):
        return np.sin(math.pi * (xs + 0.5) / N) * np.sin(math.pi * (xs - 0.5) / N)

    return _closed_with_fallback(x, closed, denominator, exact)


SLATER_METHODS = ('exact', 'closed', 'lorentzian')


def alpha_slater(x, n_q, a, method='exact'):
    """
    α(x) for the exponentially decaying input.

    `exact` sums the series, `closed` evaluates its geometric ratio and `lorentzian`
    the small-a approximation C_S / √N / (a - 2πix/N).
    """
    N = 2 ** n_q
    x = np.asarray(x, dtype=float)
    scale = slater_normalization(n_q, a) / math.sqrt(N)
    if method == 'exact':
        return _alpha_sum(x, ancilla_amplitudes(SLATER, n_q, a))
    if method == 'closed':
        return scale * (-np.expm1(2j * math.pi * x - a * N)) / (-np.expm1(2j * math.pi * x / N - a))
    if method == 'lorentzian':
        return scale / (a - 2j * math.pi * x / N)
    raise errors.QpeValidationError(
        'method must be one of {}, found {!r}'.format(SLATER_METHODS, method))


def alpha(x, cfg):
    """Exact α(x) for the configured variant."""
    return _alpha_sum(x, ancilla_amplitudes(cfg.variant, cfg.n_q, cfg.a))


def fold(x, N):
    """Wrap phase offsets into [-N/2, N/2)."""
    return (np.asarray(x) + N / 2) % N - N / 2


def analytic_pk(spec, cfg, polarization=None):
    """
    Return P_k = Σ_j |c_j|² |α(t₀(E_j - ω_ref) - k)|² over k = 0..N_q-1.

    Peaks outside the window fold back periodically. Without a polarization the
    columns are averaged, so the result still sums to one.
    """
    N = cfg.N
    scaled = cfg.t0 * (spec.energies - cfg.phase_reference)
    offsets = fold(np.subtract.outer(scaled, np.arange(N)), N)
    probabilities = np.abs(alpha(offsets, cfg)) ** 2
    weights = spec.weights if polarization is None else spec.weights[:, [polarization]]
    return (weights.T @ probabilities).mean(axis=0)
