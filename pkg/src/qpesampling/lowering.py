"""
Lowering circuits to Pauli rotations and compiling them to native trapped-ion gates.

Lowered circuits contain only rotations exp(-iθ/2 P) with P in X, Z, XX, YY or ZZ,
plus measurements, resets and barriers; every rewrite holds up to a global phase.
Native compilation maps weight-1 rotations to rx/rz and weight-2 rotations to one
MS gate between single-qubit basis changes.
"""
import math

from . import errors
from .circuits import Circuit
from .encoding import multiplexor_rotations
from .gates import GATE, Instruction
from .paulis import PauliString


LOWERED_LABELS = ('X', 'Z', 'XX', 'YY', 'ZZ')

HALF_PI = math.pi / 2


class _Emitter(object):
    """Appends lowered rotations to a circuit under an optional classical condition."""

    def __init__(self, circuit, condition=None):
        self.circuit = circuit
        self.condition = condition

    def rot(self, label, theta, targets):
        if theta == 0:
            return
        self.circuit.pauli_rotation(label, theta, list(targets), condition=self.condition)

    def h(self, q):
        self.rot('Z', HALF_PI, [q])
        self.rot('X', HALF_PI, [q])
        self.rot('Z', HALF_PI, [q])

    def s(self, q, sign=1):
        self.rot('Z', sign * HALF_PI, [q])

    def ry(self, theta, q):
        self.rot('Z', -HALF_PI, [q])
        self.rot('X', theta, [q])
        self.rot('Z', HALF_PI, [q])

    def cz(self, a, b, phi=math.pi):
        """Controlled phase diag(1, 1, 1, e^{iφ}) as ZZ(-φ/2) Z_a(φ/2) Z_b(φ/2)."""
        self.rot('ZZ', -phi / 2, [a, b])
        self.rot('Z', phi / 2, [a])
        self.rot('Z', phi / 2, [b])

    def cx(self, control, target):
        self.h(target)
        self.cz(control, target)
        self.h(target)

    def pauli_rotation(self, label, theta, targets):
        """Lower exp(-iθ/2 P) for an arbitrary label."""
        string = PauliString(label)
        support = string.support
        axes = [string.axis(q) for q in support]
        qubits = [targets[q] for q in support]
        if not qubits:
            return
        if len(qubits) == 1:
            if axes[0] == 'Y':
                self.ry(theta, qubits[0])
            else:
                self.rot(axes[0], theta, qubits)
            return
        if len(qubits) == 2 and axes[0] == axes[1]:
            self.rot(axes[0] * 2, theta, qubits)
            return
        self._basis(axes, qubits, inverse=False)
        if len(qubits) == 2:
            self.rot('ZZ', theta, qubits)
        else:
            for a, b in zip(qubits, qubits[1:]):
                self.cx(a, b)
            self.rot('Z', theta, [qubits[-1]])
            for a, b in reversed(list(zip(qubits, qubits[1:]))):
                self.cx(a, b)
        self._basis(axes, qubits, inverse=True)

    def _basis(self, axes, qubits, inverse):
        for axis, q in zip(axes, qubits):
            if axis == 'X':
                self.h(q)
            elif axis == 'Y' and not inverse:
                self.s(q, -1)
                self.h(q)
            elif axis == 'Y':
                self.h(q)
                self.s(q)


def _lower_gate(emit, instruction):
    name, q, params = instruction.name, instruction.targets, instruction.params
    if name == 'id':
        return
    if name == 'x':
        emit.rot('X', math.pi, q)
    elif name == 'y':
        emit.rot('X', math.pi, q)
        emit.rot('Z', math.pi, q)
    elif name == 'z':
        emit.rot('Z', math.pi, q)
    elif name == 'h':
        emit.h(q[0])
    elif name in ('s', 'sdg'):
        emit.s(q[0], 1 if name == 's' else -1)
    elif name in ('rx', 'rz'):
        emit.rot(name[1].upper(), params[0], q)
    elif name == 'p':
        emit.rot('Z', params[0], q)
    elif name == 'ry':
        emit.ry(params[0], q[0])
    elif name == 'cx':
        emit.cx(*q)
    elif name == 'cz':
        emit.cz(*q)
    elif name == 'cp':
        emit.cz(q[0], q[1], params[0])
    elif name == 'swap':
        emit.cx(q[0], q[1])
        emit.cx(q[1], q[0])
        emit.cx(q[0], q[1])
    elif name == 'ms':
        emit.rot('ZZ', params[0], q)
    elif name == 'givens':
        emit.pauli_rotation('YX', -params[0], q)
        emit.pauli_rotation('XY', params[0], q)
    elif name == 'pauli_rot':
        emit.pauli_rotation(instruction.label, params[0], q)
    elif name in ('mux_ry', 'mux_rz'):
        for label, theta, targets in multiplexor_rotations(name[-1], params, q):
            emit.pauli_rotation(label, theta, targets)
    else:
        raise errors.QpeCompilationError(
            'Cannot lower {} to Pauli rotations'.format(instruction), subject=instruction)


def lower_to_pauli_rotations(circuit):
    """Return an equivalent circuit whose gates are rotations about X, Z, XX, YY or ZZ."""
    lowered = Circuit(circuit.n_qubits, circuit.n_clbits, name=circuit.name)
    for instruction in circuit.instructions:
        if instruction.kind != GATE:
            lowered.append(instruction)
            continue
        _lower_gate(_Emitter(lowered, instruction.condition), instruction)
    return lowered


def is_lowered(circuit):
    return all(instruction.name == 'pauli_rot' and instruction.label in LOWERED_LABELS
               for instruction in circuit.gates)


def _native_rotation(circuit, instruction):
    label, theta, condition = instruction.label, instruction.params[0], instruction.condition
    if len(label) == 1:
        circuit.gate('r' + label.lower(), instruction.targets, [theta], condition=condition)
        return
    a, b = instruction.targets
    before, after = {'ZZ': ([], []), 'XX': (['h'], ['h']), 'YY': (['sdg', 'h'], ['h', 's'])}[label]
    for name in before:
        circuit.gate(name, [a], condition=condition)
        circuit.gate(name, [b], condition=condition)
    circuit.append(Instruction(GATE, [a, b], name='ms', params=[theta], condition=condition))
    for name in after:
        circuit.gate(name, [a], condition=condition)
        circuit.gate(name, [b], condition=condition)


def compile_native(circuit):
    """Compile to rx, rz, h, s, sdg and MS gates; each weight-2 rotation costs one MS."""
    lowered = circuit if is_lowered(circuit) else lower_to_pauli_rotations(circuit)
    native = Circuit(lowered.n_qubits, lowered.n_clbits, name='native')
    for instruction in lowered.instructions:
        if instruction.kind != GATE:
            native.append(instruction)
        else:
            _native_rotation(native, instruction)
    return native
