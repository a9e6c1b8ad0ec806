"""
Gate matrices and the Instruction record.

Matrices follow the register convention: the first target is the least-significant
local qubit. Rotations are R_A(θ) = exp(-iθA/2); the phase gate is
P(φ) = diag(1, e^{iφ}); MS(θ) = exp(-i(θ/2) Z⊗Z).
"""
import cmath
import math

import numpy as np
import scipy.linalg

from . import errors
from .paulis import PauliString


UNITARITY_TOLERANCE = 1e-10

GATE = 'gate'
MEASURE = 'measure'
RESET = 'reset'
BARRIER = 'barrier'
KINDS = (GATE, MEASURE, RESET, BARRIER)

_SQRT2_INV = 1 / math.sqrt(2)

FIXED_GATES = {
    'id': np.eye(2, dtype=complex),
    'x': np.array([[0, 1], [1, 0]], dtype=complex),
    'y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'z': np.array([[1, 0], [0, -1]], dtype=complex),
    'h': np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    's': np.array([[1, 0], [0, 1j]], dtype=complex),
    'sdg': np.array([[1, 0], [0, -1j]], dtype=complex),
    # control is local qubit 0, target local qubit 1
    'cx': np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex),
    'cz': np.diag([1, 1, 1, -1]).astype(complex),
    'swap': np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}

GATE_ARITY = {
    'id': 1, 'x': 1, 'y': 1, 'z': 1, 'h': 1, 's': 1, 'sdg': 1,
    'rx': 1, 'ry': 1, 'rz': 1, 'p': 1,
    'cx': 2, 'cz': 2, 'swap': 2, 'cp': 2, 'ms': 2, 'givens': 2,
}

SELF_INVERSE = {'id', 'x', 'y', 'z', 'h', 'cx', 'cz', 'swap'}

ANGLE_GATES = {'rx', 'ry', 'rz', 'p', 'cp', 'ms', 'givens', 'pauli_rot'}


def rx(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta):
    return np.diag([cmath.exp(-0.5j * theta), cmath.exp(0.5j * theta)])


def phase(phi):
    return np.diag([1, cmath.exp(1j * phi)])


def controlled_phase(phi):
    return np.diag([1, 1, 1, cmath.exp(1j * phi)])


def ms(theta):
    """Mølmer-Sørensen gate in its Z⊗Z form."""
    return np.diag([cmath.exp(-0.5j * theta), cmath.exp(0.5j * theta),
                    cmath.exp(0.5j * theta), cmath.exp(-0.5j * theta)])


def givens(theta):
    """
    exp(iθ/2 (X_0 Y_1 - Y_0 X_1)): rotates the single-excitation pair by θ.

    Conjugating Majorana operators by it mixes mode 0 into mode 1 with (cos θ, sin θ).
    """
    c, s = math.cos(theta), math.sin(theta)
    matrix = np.eye(4, dtype=complex)
    matrix[1, 1], matrix[1, 2] = c, s
    matrix[2, 1], matrix[2, 2] = -s, c
    return matrix


def pauli_rotation(label, theta):
    """exp(-iθ/2 P) for a Pauli label over the instruction targets."""
    string = PauliString(label)
    return (math.cos(theta / 2) * np.eye(2 ** string.n_qubits)
            - 1j * math.sin(theta / 2) * string.to_matrix())


def multiplexed_rotation(axis, thetas):
    """Block-diagonal R_axis(θ_j) on local qubit 0, selected by the higher qubits."""
    single = {'y': ry, 'z': rz}[axis]
    return scipy.linalg.block_diag(*[single(theta) for theta in thetas]).astype(complex)


PARAMETRIC_GATES = {
    'rx': rx,
    'ry': ry,
    'rz': rz,
    'p': phase,
    'cp': controlled_phase,
    'ms': ms,
    'givens': givens,
}


def is_unitary(matrix, tolerance=UNITARITY_TOLERANCE):
    matrix = np.asarray(matrix)
    return (matrix.ndim == 2 and matrix.shape[0] == matrix.shape[1]
            and np.allclose(matrix.conj().T @ matrix, np.eye(matrix.shape[0]),
                            atol=tolerance, rtol=0))


class Instruction(object):
    """
    One step of a circuit.

    `kind` is gate, measure, reset or barrier. Gates carry either a named gate with
    parameters or an explicit unitary; `condition` = (clbit, value) makes a gate
    classically controlled; measurements write to `clbit`.
    """

    __slots__ = ('kind', 'name', 'targets', 'params', 'label', 'condition', 'clbit', '_matrix')

    def __init__(self, kind, targets, name=None, params=(), matrix=None, label=None,
                 condition=None, clbit=None):
        """Validate the instruction shape; unitary payloads are checked lazily by the kernels."""
        if kind not in KINDS:
            raise errors.QpeValidationError('Unknown instruction kind {!r}'.format(kind))
        targets = tuple(int(q) for q in targets)
        params = tuple(params)
        problems = []
        if len(set(targets)) != len(targets):
            problems.append('Instruction targets must be distinct, found {}'.format(targets))
        if any(q < 0 for q in targets):
            problems.append('Instruction targets must be non-negative, found {}'.format(targets))
        if not all(np.all(np.isfinite(param)) for param in params):
            problems.append('Instruction parameters must be finite, found {}'.format(params))
        if kind == GATE:
            problems.extend(_gate_problems(name, targets, params, matrix, label))
        if kind == MEASURE and clbit is None:
            problems.append('Measurement needs a classical destination')
        if problems:
            raise errors.QpeValidationError(problems)
        self.kind = kind
        self.name = name
        self.targets = targets
        self.params = params
        self.label = label
        self.condition = tuple(condition) if condition is not None else None
        self.clbit = clbit
        self._matrix = None if matrix is None else np.asarray(matrix, dtype=complex)

    @property
    def is_gate(self):
        return self.kind == GATE

    @property
    def matrix(self):
        """Return the unitary payload of a gate."""
        if self._matrix is not None:
            return self._matrix
        if self.name in FIXED_GATES:
            return FIXED_GATES[self.name]
        if self.name in PARAMETRIC_GATES:
            return PARAMETRIC_GATES[self.name](*self.params)
        if self.name == 'pauli_rot':
            return pauli_rotation(self.label, self.params[0])
        if self.name in ('mux_ry', 'mux_rz'):
            return multiplexed_rotation(self.name[-1], self.params)
        raise errors.QpeExecutionError('Instruction {!r} has no matrix'.format(self.name))

    def inverse(self):
        """Return the inverse gate."""
        if self.kind != GATE:
            raise errors.QpeExecutionError('Only gates can be inverted, found {}'.format(self.kind))
        name, params, matrix = self.name, self.params, None
        if self._matrix is not None:
            matrix = self._matrix.conj().T
        elif name in SELF_INVERSE:
            pass
        elif name in ('s', 'sdg'):
            name = 'sdg' if name == 's' else 's'
        elif name in ANGLE_GATES or name in ('mux_ry', 'mux_rz'):
            params = tuple(-param for param in params)
        else:
            matrix = self.matrix.conj().T
        return Instruction(GATE, self.targets, name=name, params=params, matrix=matrix,
                           label=self.label, condition=self.condition)

    def remapped(self, qubit_map=None, clbit_map=None):
        """Return a copy with qubits and classical bits renamed through the maps."""
        qubit_map = qubit_map or {}
        clbit_map = clbit_map or {}
        condition = self.condition
        if condition is not None:
            condition = (clbit_map.get(condition[0], condition[0]), condition[1])
        clbit = clbit_map.get(self.clbit, self.clbit) if self.clbit is not None else None
        return Instruction(
            self.kind, [qubit_map.get(q, q) for q in self.targets], name=self.name,
            params=self.params, matrix=self._matrix, label=self.label, condition=condition,
            clbit=clbit)

    def conditioned(self, clbit, value=1):
        """Return a copy that only fires when classical bit `clbit` equals `value`."""
        return Instruction(self.kind, self.targets, name=self.name, params=self.params,
                           matrix=self._matrix, label=self.label, condition=(clbit, value))

    def __str__(self):
        parts = [self.name or self.kind]
        if self.label and self.name != 'pauli_rot':
            parts[0] = '{}[{}]'.format(parts[0], self.label)
        elif self.label:
            parts.append(self.label)
        if self.params:
            parts.append('(' + ', '.join('{:.10g}'.format(p) for p in self.params) + ')')
        parts.append(' '.join('q{}'.format(q) for q in self.targets))
        if self.clbit is not None:
            parts.append('-> c{}'.format(self.clbit))
        if self.condition is not None:
            parts.append('if c{}=={}'.format(*self.condition))
        return ' '.join(part for part in parts if part)

    def __repr__(self):
        return 'Instruction({})'.format(self)


def _gate_problems(name, targets, params, matrix, label):
    if matrix is not None:
        matrix = np.asarray(matrix)
        if matrix.shape != (2 ** len(targets),) * 2:
            return ['Gate matrix shape {} does not match {} targets'.format(
                matrix.shape, len(targets))]
        return []
    if name == 'pauli_rot':
        if label is None or len(label) != len(targets) or len(params) != 1:
            return ['pauli_rot needs a label over its targets and one angle']
        return []
    if name in ('mux_ry', 'mux_rz'):
        if len(params) != 2 ** (len(targets) - 1):
            return ['{} on {} targets needs {} angles'.format(
                name, len(targets), 2 ** (len(targets) - 1))]
        return []
    if name not in GATE_ARITY:
        return ['Unknown gate {!r}'.format(name)]
    problems = []
    if len(targets) != GATE_ARITY[name]:
        problems.append('Gate {} acts on {} qubits, found {}'.format(
            name, GATE_ARITY[name], len(targets)))
    expected_params = 1 if name in PARAMETRIC_GATES else 0
    if len(params) != expected_params:
        problems.append('Gate {} takes {} parameters, found {}'.format(
            name, expected_params, len(params)))
    return problems


def controlled(instruction, control):
    """
    Return I ⊕ U acting on (targets..., control).

    The control becomes the most-significant local qubit, so the block for
    control = 1 is the original unitary.
    """
    if not instruction.is_gate:
        raise errors.QpeValidationError('Only gates can be controlled')
    if control in instruction.targets:
        raise errors.QpeValidationError(
            'Control qubit {} overlaps targets {}'.format(control, instruction.targets))
    unitary = instruction.matrix
    if not is_unitary(unitary):
        raise errors.QpeValidationError(
            'Cannot control non-unitary gate {}'.format(instruction.label or instruction.name),
            subject=instruction)
    dim = unitary.shape[0]
    matrix = np.eye(2 * dim, dtype=complex)
    matrix[dim:, dim:] = unitary
    label = 'c-' + (instruction.label or instruction.name or 'u')
    return Instruction(GATE, instruction.targets + (control,), name='unitary', matrix=matrix,
                       label=label, condition=instruction.condition)
