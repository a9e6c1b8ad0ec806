"""
The [[k+2, k, 2]] Iceberg error-detection code.

Physical layout for k logical qubits (k even): data qubits 0..k-1, q_X = k, q_Z = k+1,
the X-syndrome ancilla k+2, the Z-syndrome ancilla k+3 (also used for logical
readout) and the flag qubit k+4. The code qubits T = D ∪ {q_X, q_Z} are stabilized by
S_X = ⊗_T X and S_Z = ⊗_T Z, and a bit string x is encoded as

    |x>_L = (|0>_{qZ} |f_x>_{qX} |x>_D + |1>_{qZ} |¬f_x>_{qX} |¬x>_D) / √2,

with f_x the parity of x. Logical operators are X̄_i = X_{qX} X_i and Z̄_i = Z_{qZ} Z_i;
products are reduced to their lightest form by multiplying with the stabilizers, e.g.
X̄_i X̄_j = X_i X_j, Z̄_i Z̄_j = Z_i Z_j and ⊗_j X̄_j = X_{qX} X_{qZ}. Any weight-1 Pauli on
T anticommutes with a stabilizer, so a syndrome round detects it and the shot is
discarded.
"""
import collections
import logging
import math

import numpy as np

from . import errors
from .circuits import Circuit
from .gates import BARRIER, GATE, MEASURE, RESET, Instruction
from .lowering import is_lowered, lower_to_pauli_rotations
from .paulis import PauliString
from .simulator import StateVector, run_shots


logger = logging.getLogger(__name__)


class IcebergLayout(object):
    """Physical qubit roles for k logical qubits."""

    def __init__(self, k):
        """Validate that k is a positive even number."""
        if not isinstance(k, (int, np.integer)) or k < 2 or k % 2:
            raise errors.QpeValidationError(
                'The Iceberg code encodes an even number of logical qubits, found {!r}'.format(k))
        self.k = int(k)

    @classmethod
    def for_logical(cls, n_logical):
        """Return the layout for `n_logical` qubits, padding odd counts with an idle qubit."""
        return cls(n_logical + n_logical % 2)

    @property
    def data(self):
        return list(range(self.k))

    @property
    def q_x(self):
        return self.k

    @property
    def q_z(self):
        return self.k + 1

    @property
    def syndrome_x(self):
        return self.k + 2

    @property
    def syndrome_z(self):
        return self.k + 3

    @property
    def flag(self):
        return self.k + 4

    @property
    def code_qubits(self):
        return self.data + [self.q_x, self.q_z]

    @property
    def n_physical(self):
        return self.k + 5

    def stabilizers(self):
        """Return (S_X, S_Z) as strings over the physical register."""
        return tuple(PauliString.from_axes({q: axis for q in self.code_qubits}, self.n_physical)
                     for axis in 'XZ')

    def __repr__(self):
        return 'IcebergLayout(k={})'.format(self.k)


class LogicalInstruction(object):
    """A logical Pauli rotation exp(-iθ/2 P̄) or a measurement of logical qubit targets[0]."""

    ROTATION = 'rotation'
    MEASURE = 'measure'

    def __init__(self, kind, targets, label=None, theta=None, clbit=None, condition=None):
        if kind == self.ROTATION and (label is None or len(label) != len(targets)):
            raise errors.QpeCompilationError('A logical rotation needs a label over its targets')
        if kind not in (self.ROTATION, self.MEASURE):
            raise errors.QpeCompilationError('Unsupported logical instruction {!r}'.format(kind))
        self.kind = kind
        self.targets = list(targets)
        self.label = label
        self.theta = theta
        self.clbit = clbit
        self.condition = condition

    @classmethod
    def from_instruction(cls, instruction):
        if instruction.kind == MEASURE:
            return cls(cls.MEASURE, instruction.targets, clbit=instruction.clbit)
        if instruction.kind == GATE and instruction.name == 'pauli_rot':
            return cls(cls.ROTATION, instruction.targets, label=instruction.label,
                       theta=instruction.params[0], condition=instruction.condition)
        raise errors.QpeCompilationError(
            'Unsupported logical instruction {}'.format(instruction), subject=instruction)

    def __repr__(self):
        if self.kind == self.MEASURE:
            return 'LogicalInstruction(measure {} -> c{})'.format(self.targets, self.clbit)
        return 'LogicalInstruction(R_{}({:.6g}) {})'.format(self.label, self.theta, self.targets)


def _logical_string(logical, layout):
    """Accept a PauliString over k logical qubits or a {qubit: axis} mapping."""
    if isinstance(logical, dict):
        return PauliString.from_axes(logical, layout.k)
    logical = PauliString(logical)
    if logical.n_qubits != layout.k:
        raise errors.QpeValidationError(
            'Logical Pauli acts on {} qubits but the layout encodes {}'.format(
                logical.n_qubits, layout.k))
    return logical


def _generator(axis, i, layout):
    if axis == 'X':
        return 1, PauliString.from_axes({layout.q_x: 'X', i: 'X'}, layout.n_physical)
    if axis == 'Z':
        return 1, PauliString.from_axes({layout.q_z: 'Z', i: 'Z'}, layout.n_physical)
    phase_x, x_bar = _generator('X', i, layout)
    phase_z, z_bar = _generator('Z', i, layout)
    phase, product = x_bar.multiply(z_bar)
    return 1j * phase, product


def logical_pauli(logical, layout):
    """
    Return (sign, physical string) with P̄ = sign · string on the code space.

    Generators are composed and the product is multiplied by S_X, S_Z or both when that
    lowers its weight.
    """
    logical = _logical_string(logical, layout)
    phase, physical = 1, PauliString.identity(layout.n_physical)
    for i in logical.support:
        factor_phase, factor = _generator(logical.axis(i), i, layout)
        product_phase, physical = physical.multiply(factor)
        phase *= factor_phase * product_phase
    s_x, s_z = layout.stabilizers()
    candidates = [(phase, physical)]
    for stabilizer in (s_x, s_z):
        for current_phase, current in list(candidates):
            product_phase, product = current.multiply(stabilizer)
            candidates.append((current_phase * product_phase, product))
    best_phase, best = min(candidates, key=lambda item: item[1].weight)
    sign = complex(best_phase)
    if abs(sign.imag) > 1e-12:
        raise errors.QpeCompilationError(
            'Logical Pauli {} reduced to a non-Hermitian form'.format(logical), subject=logical)
    return int(round(sign.real)), best


def _basis_change(circuit, axis, qubit, inverse, condition):
    if axis == 'X':
        circuit.gate('h', [qubit], condition=condition)
    elif axis == 'Y' and not inverse:
        circuit.gate('sdg', [qubit], condition=condition)
        circuit.gate('h', [qubit], condition=condition)
    elif axis == 'Y':
        circuit.gate('h', [qubit], condition=condition)
        circuit.gate('s', [qubit], condition=condition)


def logical_rotation(gate, layout, circuit=None):
    """
    Append the physical form of a logical rotation exp(-iθ/2 P̄).

    The reduced physical Pauli must have weight two; it is applied as a single MS gate
    between basis changes, with the sign folded into the angle.
    """
    if circuit is None:
        circuit = Circuit(layout.n_physical, name='logical_rotation')
    axes = {q: axis for q, axis in zip(gate.targets, reversed(gate.label)) if axis != 'I'}
    if not axes:
        return circuit
    sign, physical = logical_pauli(axes, layout)
    if physical.weight != 2:
        raise errors.QpeCompilationError(
            'Logical rotation about {} needs a weight-{} physical rotation; only weight 2 is '
            'transversal'.format(gate.label, physical.weight), subject=gate)
    theta = sign * gate.theta
    a, b = physical.support
    for q in (a, b):
        _basis_change(circuit, physical.axis(q), q, False, gate.condition)
    circuit.append(Instruction(GATE, [a, b], name='ms', params=[theta], condition=gate.condition))
    for q in (a, b):
        _basis_change(circuit, physical.axis(q), q, True, gate.condition)
    return circuit


def encode_circuit(layout, flag_clbit=0):
    """
    Prepare |0...0>_L with a flag qubit checking the ends of the CNOT chain.

    The flag is measured into `flag_clbit` and tagged as a detector.
    """
    circuit = Circuit(layout.n_physical, flag_clbit + 1, name='encode')
    chain = [layout.q_z] + layout.data + [layout.q_x]
    circuit.h(layout.q_z)
    for control, target in zip(chain, chain[1:]):
        circuit.cx(control, target)
    circuit.cx(layout.q_z, layout.flag)
    circuit.cx(layout.q_x, layout.flag)
    circuit.measure(layout.flag, flag_clbit)
    circuit.add_detector(flag_clbit, 'flag', 0)
    return circuit


def _codeword_indices(bits, layout):
    bits = [int(b) for b in bits]
    parity = sum(bits) % 2
    first = sum(b << q for q, b in zip(layout.data, bits)) | (parity << layout.q_x)
    mask = sum(1 << q for q in layout.code_qubits)
    return first, first ^ mask


def codeword_state(bits, layout):
    """Return |x>_L with every ancilla in |0>; bits[i] is logical qubit i."""
    if len(bits) != layout.k:
        raise errors.QpeValidationError(
            'Codeword needs {} logical bits, found {}'.format(layout.k, len(bits)))
    amplitudes = np.zeros(2 ** layout.n_physical, dtype=complex)
    for index in _codeword_indices(bits, layout):
        amplitudes[index] = 1 / math.sqrt(2)
    return StateVector(amplitudes)


def encoding_isometry(layout):
    """Return the 2^{n_physical} x 2^k matrix mapping logical states to codewords."""
    matrix = np.zeros((2 ** layout.n_physical, 2 ** layout.k), dtype=complex)
    for value in range(2 ** layout.k):
        bits = [(value >> i) & 1 for i in range(layout.k)]
        for index in _codeword_indices(bits, layout):
            matrix[index, value] = 1 / math.sqrt(2)
    return matrix


def decode_state(state, layout):
    """Project a physical state onto the code space; returns the k-qubit logical amplitudes."""
    amplitudes = getattr(state, 'amplitudes', state)
    return encoding_isometry(layout).conj().T @ amplitudes


def syndrome_circuit(layout, x_clbit=0, z_clbit=1, round_index=1):
    """
    Measure S_X into `x_clbit` and S_Z into `z_clbit` with 2(k+2) CNOTs.

    Each code qubit receives an X from the |+> ancilla and then copies its Z value
    onto the Z ancilla; both ancillas are reset first.
    """
    circuit = Circuit(layout.n_physical, max(x_clbit, z_clbit) + 1, name='syndrome')
    append_syndrome_round(circuit, layout, x_clbit, z_clbit, round_index)
    return circuit


def append_syndrome_round(circuit, layout, x_clbit, z_clbit, round_index):
    sx, sz = layout.syndrome_x, layout.syndrome_z
    circuit.reset(sx)
    circuit.reset(sz)
    circuit.h(sx)
    for q in layout.code_qubits:
        circuit.cx(sx, q)
        circuit.cx(q, sz)
    circuit.h(sx)
    circuit.measure(sx, x_clbit)
    circuit.measure(sz, z_clbit)
    circuit.add_detector(x_clbit, 'x', round_index)
    circuit.add_detector(z_clbit, 'z', round_index)
    return circuit


def append_logical_measurement(circuit, layout, logical_target, clbit):
    """
    Measure Z̄_a = Z_{qZ} Z_a onto the Z-syndrome ancilla, leaving a valid codeword.

    The readout is unflagged: an X fault on the ancilla after its CNOTs flips the
    logical result and is not detected. Faults that reach the code qubits are caught
    by the following syndrome round.
    """
    sz = layout.syndrome_z
    circuit.reset(sz)
    circuit.cx(layout.q_z, sz)
    circuit.cx(logical_target, sz)
    circuit.measure(sz, clbit)
    return circuit


def append_logical_flip(circuit, layout, logical_target, clbit):
    """Apply X̄_a when classical bit `clbit` is 1, returning the qubit to |0>_L."""
    circuit.x(layout.q_x, condition=(clbit, 1))
    circuit.x(logical_target, condition=(clbit, 1))
    return circuit


def reencode_for_measurement(layout, logical_target, clbit=0, reset=False):
    """
    Measure one logical qubit mid-circuit without leaving the code space.

    With `reset` the measured qubit is returned to |0>_L by a classically controlled X̄.
    """
    if logical_target not in layout.data:
        raise errors.QpeValidationError(
            'Logical qubit {} is not encoded by {}'.format(logical_target, layout))
    circuit = Circuit(layout.n_physical, clbit + 1, name='reencode')
    append_logical_measurement(circuit, layout, logical_target, clbit)
    if reset:
        append_logical_flip(circuit, layout, logical_target, clbit)
    return circuit


class CompiledProgram(object):
    """A physical circuit with its layout, logical readout bits and error-injection points."""

    def __init__(self, circuit, layout, n_logical_clbits, injection_points):
        self.circuit = circuit
        self.layout = layout
        self.n_logical_clbits = n_logical_clbits
        self.injection_points = list(injection_points)

    @property
    def n_two_qubit(self):
        return self.circuit.n_two_qubit

    @property
    def n_mid_circuit_measurements(self):
        return self.circuit.n_mid_circuit_measurements

    @property
    def n_syndrome_rounds(self):
        return max((detector.round_index for detector in self.circuit.detectors), default=0)

    def with_error(self, location, qubit, axis):
        """Return a copy with a Pauli gate inserted before instruction `location`."""
        circuit = self.circuit.copy()
        circuit.instructions.insert(location, Instruction(GATE, [qubit], name=axis.lower()))
        return CompiledProgram(circuit, self.layout, self.n_logical_clbits,
                               self.injection_points)

    def __repr__(self):
        return 'CompiledProgram({!r}, n2q={}, rounds={})'.format(
            self.layout, self.n_two_qubit, self.n_syndrome_rounds)


def compile_logical(circuit, layout=None, syndrome_period=None):
    """
    Compile a logical circuit under the Iceberg code.

    The circuit is lowered to X, Z, XX, YY and ZZ rotations first. A syndrome round
    follows every `syndrome_period` two-qubit logical rotations (never when None;
    single-qubit rotations do not count), precedes every logical measurement or
    reset, and closes the circuit. Logical classical bits keep their indices;
    detection bits are appended after them.
    """
    if syndrome_period is not None and syndrome_period < 1:
        raise errors.QpeValidationError(
            'syndrome_period must be at least 1, found {}'.format(syndrome_period))
    layout = layout or IcebergLayout.for_logical(circuit.n_qubits)
    if circuit.n_qubits > layout.k:
        raise errors.QpeCompilationError(
            'Circuit on {} qubits does not fit {}'.format(circuit.n_qubits, layout))
    lowered = circuit if is_lowered(circuit) else lower_to_pauli_rotations(circuit)
    physical = Circuit(layout.n_physical, lowered.n_clbits, name='iceberg')
    physical.compose(encode_circuit(layout), clbits=[physical.add_clbits()])
    injection_points = []
    state = {'round': 0, 'since_round': 0, 'closed': False}

    def syndrome_round():
        injection_points.append(len(physical.instructions))
        state['round'] += 1
        state['since_round'] = 0
        state['closed'] = True
        x_clbit = physical.add_clbits(2)
        append_syndrome_round(physical, layout, x_clbit, x_clbit + 1, state['round'])

    for instruction in lowered.instructions:
        if instruction.kind == BARRIER:
            continue
        last_measured, state['last_measured'] = state.get('last_measured'), None
        if instruction.kind in (MEASURE, RESET):
            target = instruction.targets[0]
            if instruction.kind == RESET and last_measured and last_measured[0] == target:
                append_logical_flip(physical, layout, target, last_measured[1])
                continue
            if not state['closed']:
                syndrome_round()
            state['closed'] = False
            if instruction.kind == MEASURE:
                append_logical_measurement(physical, layout, target, instruction.clbit)
                state['last_measured'] = (target, instruction.clbit)
                continue
            scratch = physical.add_clbits()
            append_logical_measurement(physical, layout, target, scratch)
            append_logical_flip(physical, layout, target, scratch)
            continue
        logical_rotation(LogicalInstruction.from_instruction(instruction), layout, physical)
        state['closed'] = False
        if len(instruction.targets) == 2:
            state['since_round'] += 1
        if syndrome_period is not None and state['since_round'] >= syndrome_period:
            syndrome_round()
    if not state['closed']:
        syndrome_round()
    logger.info('Compiled %r under %r: n2q=%d, mid-circuit measurements=%d, rounds=%d',
                circuit, layout, physical.n_two_qubit, physical.n_mid_circuit_measurements,
                state['round'])
    return CompiledProgram(physical, layout, lowered.n_clbits, injection_points)


RoundStats = collections.namedtuple(
    'RoundStats', ['round_index', 'cumulative_n2q', 'x_detections', 'z_detections',
                   'discard_rate'])


class DiscardStats(object):
    """
    Shot counts and per-round detections of a run with error detection.

    `rounds` rows count shots whose X- or Z-type detector fired in that round;
    `discard_rate` of a row is the fraction of shots discarded by the end of it.
    Statistics of batches over the same program merge with `+`.
    """

    def __init__(self, shots_total, shots_discarded, rounds, n_two_qubit, flag_detections=0):
        if not 0 <= shots_discarded <= shots_total:
            raise errors.QpeValidationError('Discarded shots must lie in [0, total]')
        self.shots_total = shots_total
        self.shots_discarded = shots_discarded
        self.rounds = list(rounds)
        self.n_two_qubit = n_two_qubit
        self.flag_detections = flag_detections

    @property
    def shots_accepted(self):
        return self.shots_total - self.shots_discarded

    @property
    def discard_rate(self):
        return self.shots_discarded / self.shots_total if self.shots_total else 0.0

    @property
    def no_accepted(self):
        """Return whether every shot was discarded."""
        return self.shots_accepted == 0

    def __add__(self, other):
        if [row.round_index for row in self.rounds] != [row.round_index for row in other.rounds]:
            raise errors.QpeValidationError('Cannot merge statistics of different programs')
        total = self.shots_total + other.shots_total
        rounds = [
            RoundStats(a.round_index, a.cumulative_n2q, a.x_detections + b.x_detections,
                       a.z_detections + b.z_detections,
                       (a.discard_rate * self.shots_total + b.discard_rate * other.shots_total)
                       / total if total else 0.0)
            for a, b in zip(self.rounds, other.rounds)]
        return DiscardStats(total, self.shots_discarded + other.shots_discarded, rounds,
                            self.n_two_qubit, self.flag_detections + other.flag_detections)

    def __repr__(self):
        return 'DiscardStats(total={}, discarded={}, rate={:.4f}, n2q={})'.format(
            self.shots_total, self.shots_discarded, self.discard_rate, self.n_two_qubit)


def _discard_statistics(circuit, records):
    detectors = circuit.detectors
    round_indices = sorted({d.round_index for d in detectors if d.kind != 'flag'})
    cumulative = {}
    for d in detectors:
        cumulative[d.round_index] = max(cumulative.get(d.round_index, 0), d.cumulative_n2q)
    x_counts = collections.Counter()
    z_counts = collections.Counter()
    first_fired = collections.Counter()
    flags = 0
    discarded = 0
    for record in records:
        fired = [d for d in detectors if record.bits[d.clbit]]
        record.discarded = bool(fired)
        if not fired:
            continue
        discarded += 1
        first_fired[min(d.round_index for d in fired)] += 1
        for d in fired:
            if d.kind == 'x':
                x_counts[d.round_index] += 1
            elif d.kind == 'z':
                z_counts[d.round_index] += 1
            else:
                flags += 1
    total = len(records)
    rows = []
    running = first_fired[0]
    for index in round_indices:
        running += first_fired[index]
        rows.append(RoundStats(index, cumulative[index], x_counts[index], z_counts[index],
                               running / total))
    return DiscardStats(total, discarded, rows, circuit.n_two_qubit, flags)


def run_with_discard(program, noise=None, shots=1000, seed=0):
    """
    Run a compiled program and drop every shot where a detection bit fired.

    Returns the histogram of accepted shots over the logical classical bits and the
    DiscardStats. When every shot is discarded the histogram is empty and
    `stats.no_accepted` is set.
    """
    circuit = program.circuit
    records = run_shots(circuit, StateVector.zero(circuit.n_qubits), shots, noise, seed)[1]
    stats = _discard_statistics(circuit, records)
    accepted = collections.Counter(
        ''.join(str(bit) for bit in reversed(record.bits[:program.n_logical_clbits]))
        for record in records if not record.discarded)
    if stats.no_accepted:
        logger.warning('All %d shots were discarded', shots)
    return dict(accepted), stats


def discard_model(n_2q, p2):
    """Return the expected discard rate 1 - (1 - p2)^N_2Q."""
    if not 0 <= p2 <= 1:
        raise errors.QpeValidationError('p2 must lie in [0, 1], found {!r}'.format(p2))
    if n_2q == 0:
        return 0.0
    return 1 - (1 - p2) ** n_2q


FitResult = collections.namedtuple('FitResult', ['p2', 'residual'])


def fit_p2(points):
    """
    Fit log(1 - d) = N_2Q log(1 - p2) by least squares through the origin.

    Points with a discard rate of one carry no information and are dropped with a
    warning. Returns FitResult(p2, residual) with the root-sum-square residual.
    """
    kept = []
    for n_2q, rate in points:
        if rate >= 1:
            logger.warning('Dropping fit point N_2Q=%s with discard rate %s', n_2q, rate)
            continue
        if rate < 0:
            raise errors.QpeValidationError('Discard rates must be non-negative, found {}'.format(rate))
        kept.append((float(n_2q), float(rate)))
    if len(kept) < 2:
        raise errors.QpeValidationError(
            'fit_p2 needs at least two points with discard rate below one, found {}'.format(
                len(kept)))
    counts = np.array([n for n, _ in kept])
    logs = np.log1p(-np.array([rate for _, rate in kept]))
    slope = counts @ logs / (counts @ counts)
    residual = float(np.sqrt(np.sum((logs - slope * counts) ** 2)))
    return FitResult(float(-np.expm1(slope)), residual)
