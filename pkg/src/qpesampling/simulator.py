"""
Dense statevector simulation with mid-circuit measurement, reset and classical control.

Noise uses stochastic unravelling: after every executed two-qubit gate a uniformly
random non-identity two-qubit Pauli is applied with probability p2, and a recorded
measurement bit flips with probability p_spam. Shot `i` of a run seeded with `seed`
uses the generator `numpy.random.default_rng(seed ^ i)`; measurements draw
u ~ U[0, 1) and report 0 iff u < P(0) (inverse-CDF sampling in basis order).
"""
import collections
import itertools
import logging

import numpy as np

from . import checks
from . import context
from . import errors
from .gates import BARRIER, GATE, MEASURE, RESET, is_unitary
from .paulis import PauliString


logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-10

BRANCH_CUTOFF = 1e-14

TWO_QUBIT_PAULIS = tuple(
    a + b for a, b in itertools.product('IXYZ', repeat=2) if a + b != 'II')

_PAULI_MATRICES = {label: PauliString(label).to_matrix() for label in TWO_QUBIT_PAULIS}


class StateVector(object):
    """A dense complex amplitude vector over `n_qubits` qubits."""

    def __init__(self, amplitudes, normalize=False):
        """Wrap the amplitudes, checking the length is a power of two and the norm is one."""
        amplitudes = np.array(amplitudes, dtype=complex).reshape(-1)
        n_qubits = int(round(np.log2(len(amplitudes)))) if len(amplitudes) else -1
        if n_qubits < 0 or 2 ** n_qubits != len(amplitudes):
            raise errors.QpeValidationError(
                'State length must be a power of two, found {}'.format(len(amplitudes)))
        norm = np.linalg.norm(amplitudes)
        if normalize:
            if norm == 0:
                raise errors.QpeValidationError('Cannot normalize the zero vector')
            amplitudes = amplitudes / norm
        elif abs(norm - 1) > NORM_TOLERANCE:
            raise errors.QpeValidationError(
                'State is not normalized (norm {:.12g})'.format(norm))
        self.amplitudes = amplitudes
        self.n_qubits = n_qubits

    @classmethod
    def zero(cls, n_qubits):
        return cls.basis(0, n_qubits)

    @classmethod
    def basis(cls, index, n_qubits):
        amplitudes = np.zeros(2 ** n_qubits, dtype=complex)
        amplitudes[index] = 1
        return cls(amplitudes)

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def copy(self):
        return StateVector(self.amplitudes.copy())

    def tensor(self, other):
        """Return self ⊗ other with `other` on the low qubits."""
        return StateVector(np.kron(self.amplitudes, other.amplitudes))

    def inner(self, other):
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other):
        """Return |<self|other>|, insensitive to global phase."""
        return abs(self.inner(other))

    def expectation(self, operator):
        return operator.expectation(self.amplitudes)

    def __len__(self):
        return len(self.amplitudes)

    def __repr__(self):
        return 'StateVector(n_qubits={})'.format(self.n_qubits)


class NoiseModel(object):
    """Two-qubit depolarizing probability p2 and optional measurement flip probability."""

    def __init__(self, p2=0.0, p_spam=0.0):
        """Validate that both probabilities lie in [0, 1]."""
        problems = [
            '{} must lie in [0, 1], found {!r}'.format(name, value)
            for name, value in (('p2', p2), ('p_spam', p_spam))
            if not 0 <= value <= 1]
        if problems:
            raise errors.QpeValidationError(problems)
        self.p2 = float(p2)
        self.p_spam = float(p_spam)

    @property
    def is_noiseless(self):
        return self.p2 == 0 and self.p_spam == 0

    def __repr__(self):
        return 'NoiseModel(p2={}, p_spam={})'.format(self.p2, self.p_spam)


NOISELESS = NoiseModel()


class ShotRecord(object):
    """Classical bits of one shot, its seed, its noise events and the discard flag."""

    def __init__(self, bits, seed, events=(), discarded=False):
        self.bits = tuple(int(bit) for bit in bits)
        self.seed = seed
        self.events = list(events)
        self.discarded = discarded

    @property
    def outcome(self):
        """Return the bits as a string with classical bit 0 rightmost."""
        return bits_to_string(self.bits)

    def __repr__(self):
        return 'ShotRecord(outcome={!r}, seed={}, events={}, discarded={})'.format(
            self.outcome, self.seed, len(self.events), self.discarded)


def bits_to_string(bits):
    return ''.join(str(bit) for bit in reversed(bits))


def bits_to_int(bits):
    return sum(bit << index for index, bit in enumerate(bits))


def _apply_matrix(amplitudes, matrix, targets, n_qubits):
    """Apply a 2^k x 2^k matrix to `targets`; a trailing batch axis is carried along."""
    k = len(targets)
    tensor = amplitudes.reshape([2] * n_qubits + list(amplitudes.shape[1:]))
    axes = [n_qubits - 1 - q for q in reversed(targets)]
    gate = np.asarray(matrix).reshape([2] * (2 * k))
    moved = np.tensordot(gate, tensor, axes=(list(range(k, 2 * k)), axes))
    moved = np.moveaxis(moved, list(range(k)), axes)
    return moved.reshape(amplitudes.shape)


def _gate_matrix(instruction):
    matrix = instruction.matrix
    if instruction.name == 'unitary' and not is_unitary(matrix):
        raise errors.QpeExecutionError(
            'Gate payload {!r} is not unitary'.format(instruction.label), subject=instruction)
    return matrix


def _check_targets(instruction, n_qubits):
    if any(q >= n_qubits for q in instruction.targets):
        raise errors.QpeValidationError(
            'Instruction {} addresses qubits outside a {}-qubit state'.format(
                instruction, n_qubits))


def apply_gate(state, instruction):
    """Return a new state with a gate instruction applied; classical conditions are ignored."""
    if instruction.kind != GATE:
        raise errors.QpeValidationError('apply_gate needs a gate, found {}'.format(instruction.kind))
    _check_targets(instruction, state.n_qubits)
    amplitudes = _apply_matrix(
        state.amplitudes, _gate_matrix(instruction), instruction.targets, state.n_qubits)
    return StateVector(amplitudes)


def _bit_mask(qubit, n_qubits):
    return (np.arange(2 ** n_qubits) >> qubit) & 1


def _collapse(amplitudes, qubit, outcome, probability, n_qubits):
    keep = _bit_mask(qubit, n_qubits) == outcome
    collapsed = np.where(keep, amplitudes, 0)
    return collapsed / np.sqrt(probability)


def _one_probability(amplitudes, qubit, n_qubits):
    return float(np.sum(np.abs(amplitudes[_bit_mask(qubit, n_qubits) == 1]) ** 2))


def _fires(instruction, clbits):
    return instruction.condition is None or clbits[instruction.condition[0]] == instruction.condition[1]


def _execute(circuit, amplitudes, rng, noise):
    n = circuit.n_qubits
    clbits = [0] * circuit.n_clbits
    events = []
    for index, instruction in enumerate(circuit.instructions):
        if instruction.kind == BARRIER or not _fires(instruction, clbits):
            continue
        if instruction.kind == GATE:
            amplitudes = _apply_matrix(amplitudes, _gate_matrix(instruction), instruction.targets, n)
            if noise.p2 and len(instruction.targets) == 2 and rng.random() < noise.p2:
                label = TWO_QUBIT_PAULIS[rng.integers(len(TWO_QUBIT_PAULIS))]
                amplitudes = _apply_matrix(amplitudes, _PAULI_MATRICES[label], instruction.targets, n)
                events.append((index, label))
            continue
        qubit = instruction.targets[0]
        p_one = min(max(_one_probability(amplitudes, qubit, n), 0.0), 1.0)
        outcome = 0 if rng.random() < 1 - p_one else 1
        amplitudes = _collapse(amplitudes, qubit, outcome, p_one if outcome else 1 - p_one, n)
        if instruction.kind == MEASURE:
            recorded = outcome
            if noise.p_spam and rng.random() < noise.p_spam:
                recorded ^= 1
                events.append((index, 'spam'))
            clbits[instruction.clbit] = recorded
        elif instruction.kind == RESET and outcome:
            amplitudes = _apply_matrix(amplitudes, np.array([[0, 1], [1, 0]]), [qubit], n)
    return amplitudes, clbits, events


def _resolve_noise(noise):
    if noise is None:
        noise = context.get_setting('noise')
    return NOISELESS if noise is None else noise


def _check_register(circuit, state):
    if circuit.n_qubits != state.n_qubits:
        raise errors.QpeValidationError(
            'Circuit acts on {} qubits but the state has {}'.format(
                circuit.n_qubits, state.n_qubits))


def run_pure(circuit, state, seed=None, noise=None):
    """Execute one trajectory; return (final StateVector, classical bits)."""
    final, clbits, _ = _run_trajectory(circuit, state, seed, _resolve_noise(noise))
    return final, clbits


def _run_trajectory(circuit, state, seed, noise):
    _check_register(circuit, state)
    rng = np.random.default_rng(seed)
    amplitudes, clbits, events = _execute(circuit, state.amplitudes.copy(), rng, noise)
    return StateVector(amplitudes, normalize=True), clbits, events


def _terminal_measurements(circuit):
    """Return {qubit: clbit} when every measurement is terminal and qubits are measured once."""
    if circuit.is_dynamic():
        return None
    measured = {}
    for instruction in circuit.instructions:
        if instruction.kind == MEASURE:
            if instruction.targets[0] in measured:
                return None
            measured[instruction.targets[0]] = instruction.clbit
    return measured


def run_shots(circuit, state, n_shots, noise=None, seed=0):
    """
    Sample `n_shots` trajectories.

    Returns (histogram keyed by outcome string, list of ShotRecord). Noiseless circuits
    whose measurements are all terminal are simulated once and sampled per shot.
    """
    if n_shots < 1:
        raise errors.QpeValidationError('n_shots must be at least 1, found {}'.format(n_shots))
    noise = _resolve_noise(noise)
    seed = 0 if seed is None else int(seed)
    terminal = _terminal_measurements(circuit) if noise.is_noiseless else None
    records = []
    if terminal is not None:
        _check_register(circuit, state)
        amplitudes = state.amplitudes.copy()
        for instruction in circuit.gates:
            amplitudes = _apply_matrix(
                amplitudes, _gate_matrix(instruction), instruction.targets, circuit.n_qubits)
        qubits = sorted(terminal)
        cdf = np.cumsum(marginal_distribution(StateVector(amplitudes, normalize=True), qubits))
        for shot in range(n_shots):
            u = np.random.default_rng(seed ^ shot).random()
            value = min(int(np.searchsorted(cdf, u, side='right')), len(cdf) - 1)
            bits = [0] * circuit.n_clbits
            for position, qubit in enumerate(qubits):
                bits[terminal[qubit]] = (value >> position) & 1
            records.append(ShotRecord(bits, seed ^ shot))
    else:
        for shot in range(n_shots):
            _, clbits, events = _run_trajectory(circuit, state, seed ^ shot, noise)
            records.append(ShotRecord(clbits, seed ^ shot, events))
    histogram = collections.Counter(record.outcome for record in records)
    logger.debug('Ran %d shots of %r with %r', n_shots, circuit, noise)
    return histogram, records


def outcome_distribution(circuit, state):
    """
    Return the exact distribution of classical outcomes of a noiseless run.

    Measurement and reset branches are enumerated; branches below 1e-14 are dropped.
    Keys are tuples of classical bits (bit 0 first).
    """
    _check_register(circuit, state)
    n = circuit.n_qubits
    distribution = collections.defaultdict(float)
    stack = [(0, state.amplitudes.copy(), [0] * circuit.n_clbits, 1.0)]
    while stack:
        start, amplitudes, clbits, weight = stack.pop()
        for index in range(start, len(circuit.instructions)):
            instruction = circuit.instructions[index]
            if instruction.kind == BARRIER or not _fires(instruction, clbits):
                continue
            if instruction.kind == GATE:
                amplitudes = _apply_matrix(
                    amplitudes, _gate_matrix(instruction), instruction.targets, n)
                continue
            qubit = instruction.targets[0]
            p_one = min(max(_one_probability(amplitudes, qubit, n), 0.0), 1.0)
            branches = []
            for outcome, probability in ((0, 1 - p_one), (1, p_one)):
                if weight * probability < BRANCH_CUTOFF:
                    continue
                collapsed = _collapse(amplitudes, qubit, outcome, probability, n)
                bits = list(clbits)
                if instruction.kind == MEASURE:
                    bits[instruction.clbit] = outcome
                elif outcome:
                    collapsed = _apply_matrix(collapsed, np.array([[0, 1], [1, 0]]), [qubit], n)
                branches.append((index + 1, collapsed, bits, weight * probability))
            stack.extend(reversed(branches))
            break
        else:
            distribution[tuple(clbits)] += weight
    return dict(distribution)


def final_states(circuit, state):
    """Return [(probability, classical bits, StateVector)] for every noiseless branch."""
    branches = []
    n = circuit.n_qubits
    stack = [(0, state.amplitudes.copy(), [0] * circuit.n_clbits, 1.0)]
    while stack:
        start, amplitudes, clbits, weight = stack.pop()
        for index in range(start, len(circuit.instructions)):
            instruction = circuit.instructions[index]
            if instruction.kind == BARRIER or not _fires(instruction, clbits):
                continue
            if instruction.kind == GATE:
                amplitudes = _apply_matrix(
                    amplitudes, _gate_matrix(instruction), instruction.targets, n)
                continue
            qubit = instruction.targets[0]
            p_one = min(max(_one_probability(amplitudes, qubit, n), 0.0), 1.0)
            for outcome, probability in ((1, p_one), (0, 1 - p_one)):
                if weight * probability < BRANCH_CUTOFF:
                    continue
                collapsed = _collapse(amplitudes, qubit, outcome, probability, n)
                bits = list(clbits)
                if instruction.kind == MEASURE:
                    bits[instruction.clbit] = outcome
                elif outcome:
                    collapsed = _apply_matrix(collapsed, np.array([[0, 1], [1, 0]]), [qubit], n)
                stack.append((index + 1, collapsed, bits, weight * probability))
            break
        else:
            branches.append((weight, tuple(clbits), StateVector(amplitudes, normalize=True)))
    return branches


def marginal_distribution(state, qubits):
    """Return exact probabilities over `qubits`, with qubits[0] as the least-significant bit."""
    qubits = list(qubits)
    if not qubits:
        raise errors.QpeValidationError('marginal_distribution needs at least one qubit')
    n = state.n_qubits
    keep = [n - 1 - q for q in qubits]
    probabilities = state.probabilities().reshape([2] * n)
    reduced = probabilities.sum(axis=tuple(axis for axis in range(n) if axis not in keep))
    remaining = sorted(keep)
    order = [remaining.index(keep[position]) for position in reversed(range(len(qubits)))]
    return np.transpose(reduced, order).reshape(-1)


@checks.dense_limited
def circuit_unitary(circuit):
    """Return the matrix of a purely unitary circuit."""
    if not circuit.is_unitary():
        raise errors.QpeExecutionError('Circuit contains non-unitary instructions')
    dim = 2 ** circuit.n_qubits
    matrix = np.eye(dim, dtype=complex)
    for instruction in circuit.gates:
        matrix = _apply_matrix(matrix, _gate_matrix(instruction), instruction.targets,
                               circuit.n_qubits)
    return matrix


def run_unitary(circuit, state):
    """Apply every gate of a unitary circuit to a state."""
    _check_register(circuit, state)
    if not circuit.is_unitary():
        raise errors.QpeExecutionError('Circuit contains non-unitary instructions')
    amplitudes = state.amplitudes
    for instruction in circuit.gates:
        amplitudes = _apply_matrix(amplitudes, _gate_matrix(instruction), instruction.targets,
                                   circuit.n_qubits)
    return StateVector(amplitudes, normalize=True)
