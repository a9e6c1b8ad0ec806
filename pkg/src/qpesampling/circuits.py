"""Container class for building circuits over quantum and classical registers."""
import collections

from . import errors
from .gates import BARRIER, GATE, MEASURE, RESET, Instruction


Detector = collections.namedtuple(
    'Detector', ['clbit', 'kind', 'round_index', 'cumulative_n2q'])

DETECTOR_KINDS = ('flag', 'x', 'z')


class Circuit(object):
    """An ordered list of instructions over `n_qubits` qubits and `n_clbits` classical bits."""

    def __init__(self, n_qubits, n_clbits=0, instructions=(), name=None):
        """Create the registers and append any initial instructions."""
        if n_qubits < 0 or n_clbits < 0:
            raise errors.QpeValidationError('Register sizes must be non-negative')
        self.n_qubits = n_qubits
        self.n_clbits = n_clbits
        self.name = name
        self.instructions = []
        self.detectors = []
        for instruction in instructions:
            self.append(instruction)

    def append(self, instruction):
        """Append an instruction after checking register bounds."""
        problems = []
        for q in instruction.targets:
            if q >= self.n_qubits:
                problems.append('Qubit {} out of range for {} qubits'.format(q, self.n_qubits))
        for clbit in (instruction.clbit,
                      instruction.condition[0] if instruction.condition else None):
            if clbit is not None and not 0 <= clbit < self.n_clbits:
                problems.append('Classical bit {} out of range for {} bits'.format(
                    clbit, self.n_clbits))
        if problems:
            raise errors.QpeValidationError(problems, subject=instruction)
        self.instructions.append(instruction)
        return self

    def add_clbits(self, count=1):
        """Grow the classical register and return the index of the first new bit."""
        first = self.n_clbits
        self.n_clbits += count
        return first

    def add_detector(self, clbit, kind, round_index):
        """Tag a classical bit as an error-detection bit; any nonzero value discards a shot."""
        if kind not in DETECTOR_KINDS:
            raise errors.QpeValidationError('Unknown detector kind {!r}'.format(kind))
        self.detectors.append(Detector(clbit, kind, round_index, self.n_two_qubit))
        return self

    @property
    def detection_bits(self):
        return [detector.clbit for detector in self.detectors]

    def gate(self, name, targets, params=(), condition=None):
        return self.append(Instruction(GATE, targets, name=name, params=params,
                                       condition=condition))

    def h(self, qubit):
        return self.gate('h', [qubit])

    def x(self, qubit, condition=None):
        return self.gate('x', [qubit], condition=condition)

    def y(self, qubit):
        return self.gate('y', [qubit])

    def z(self, qubit):
        return self.gate('z', [qubit])

    def s(self, qubit):
        return self.gate('s', [qubit])

    def sdg(self, qubit):
        return self.gate('sdg', [qubit])

    def rx(self, theta, qubit):
        return self.gate('rx', [qubit], [theta])

    def ry(self, theta, qubit):
        return self.gate('ry', [qubit], [theta])

    def rz(self, theta, qubit):
        return self.gate('rz', [qubit], [theta])

    def p(self, phi, qubit, condition=None):
        return self.gate('p', [qubit], [phi], condition=condition)

    def cx(self, control, target):
        return self.gate('cx', [control, target])

    def cz(self, a, b):
        return self.gate('cz', [a, b])

    def cp(self, phi, a, b):
        return self.gate('cp', [a, b], [phi])

    def swap(self, a, b):
        return self.gate('swap', [a, b])

    def ms(self, theta, a, b):
        return self.gate('ms', [a, b], [theta])

    def givens(self, theta, low, high):
        return self.gate('givens', [low, high], [theta])

    def pauli_rotation(self, label, theta, targets, condition=None):
        """Append exp(-iθ/2 P); `label`'s rightmost character acts on targets[0]."""
        return self.append(Instruction(GATE, targets, name='pauli_rot', params=[theta],
                                       label=label, condition=condition))

    def multiplexed_rotation(self, axis, thetas, targets):
        """Append R_axis(θ_j) on targets[0] selected by the value j of targets[1:]."""
        return self.append(Instruction(GATE, targets, name='mux_r' + axis, params=thetas))

    def unitary(self, matrix, targets, label=None, condition=None):
        return self.append(Instruction(GATE, targets, name='unitary', matrix=matrix,
                                       label=label, condition=condition))

    def measure(self, qubit, clbit):
        return self.append(Instruction(MEASURE, [qubit], clbit=clbit))

    def reset(self, qubit):
        return self.append(Instruction(RESET, [qubit]))

    def barrier(self, label=None):
        return self.append(Instruction(BARRIER, [], label=label))

    def compose(self, other, qubits=None, clbits=None):
        """Append another circuit, mapping its qubit i to qubits[i] and clbit j to clbits[j]."""
        qubits = list(range(other.n_qubits)) if qubits is None else list(qubits)
        clbits = list(range(other.n_clbits)) if clbits is None else list(clbits)
        if len(qubits) != other.n_qubits or len(clbits) != other.n_clbits:
            raise errors.QpeValidationError(
                'Composition maps {} qubits and {} clbits onto {} and {}'.format(
                    other.n_qubits, other.n_clbits, len(qubits), len(clbits)))
        qubit_map = dict(enumerate(qubits))
        clbit_map = dict(enumerate(clbits))
        offset = self.n_two_qubit
        for instruction in other.instructions:
            self.append(instruction.remapped(qubit_map, clbit_map))
        for detector in other.detectors:
            self.detectors.append(Detector(clbit_map[detector.clbit], detector.kind,
                                           detector.round_index,
                                           offset + detector.cumulative_n2q))
        return self

    def inverse(self):
        """Return the adjoint of a circuit made only of unconditioned gates."""
        if not self.is_unitary():
            raise errors.QpeExecutionError('Only purely unitary circuits can be inverted')
        return Circuit(self.n_qubits, self.n_clbits, [
            instruction.inverse() for instruction in reversed(self.instructions)
            if instruction.kind == GATE], name=self.name and self.name + '_dg')

    def copy(self):
        duplicate = Circuit(self.n_qubits, self.n_clbits, self.instructions, name=self.name)
        duplicate.detectors = list(self.detectors)
        return duplicate

    def is_unitary(self):
        return all(instruction.kind in (GATE, BARRIER) and instruction.condition is None
                   for instruction in self.instructions)

    def is_dynamic(self):
        """Return whether any measurement is followed by a gate, reset or classical condition."""
        measured = False
        for instruction in self.instructions:
            if instruction.kind == MEASURE:
                measured = True
            elif instruction.condition is not None or instruction.kind == RESET:
                return True
            elif measured and instruction.kind == GATE:
                return True
        return False

    @property
    def gates(self):
        return [instruction for instruction in self.instructions if instruction.kind == GATE]

    @property
    def n_two_qubit(self):
        """Return N_2Q, the number of two-qubit gates."""
        return sum(1 for instruction in self.gates if len(instruction.targets) == 2)

    @property
    def n_measurements(self):
        return sum(1 for instruction in self.instructions if instruction.kind == MEASURE)

    @property
    def n_mid_circuit_measurements(self):
        """Return the number of measurements followed by at least one later gate."""
        last_gate = max((index for index, instruction in enumerate(self.instructions)
                         if instruction.kind in (GATE, RESET)), default=-1)
        return sum(1 for index, instruction in enumerate(self.instructions)
                   if instruction.kind == MEASURE and index < last_gate)

    def to_text(self):
        """Dump one instruction per line for debugging."""
        header = '# circuit {} qubits={} clbits={} n2q={}'.format(
            self.name or '', self.n_qubits, self.n_clbits, self.n_two_qubit)
        return '\n'.join([header] + [str(instruction) for instruction in self.instructions])

    def __len__(self):
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def __repr__(self):
        return 'Circuit(n_qubits={}, n_clbits={}, instructions={})'.format(
            self.n_qubits, self.n_clbits, len(self.instructions))
