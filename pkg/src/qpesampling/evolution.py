"""
Real-time evolution U(t) = exp(+2πi t H) as exact gates or Pauli-rotation circuits.
"""
import math

import numpy as np

from . import checks
from . import errors
from .circuits import Circuit
from .gates import GATE, Instruction


def _register(h, qubits):
    qubits = list(range(h.n_qubits)) if qubits is None else list(qubits)
    if len(qubits) != h.n_qubits:
        raise errors.QpeValidationError(
            'Operator on {} qubits cannot be placed on {} qubits'.format(h.n_qubits, len(qubits)))
    return qubits


@checks.hermitian_required
@checks.dense_limited
def evolution_matrix(h, t):
    """Return exp(2πi t H) by eigendecomposition."""
    energies, vectors = np.linalg.eigh(h.to_matrix())
    return (vectors * np.exp(2j * math.pi * t * energies)) @ vectors.conj().T


def exact_evolution_gate(h, t, qubits=None):
    """Return exp(2πi t H) on `qubits` (default 0..n-1) as an explicit unitary instruction."""
    qubits = _register(h, qubits)
    return Instruction(GATE, qubits, name='unitary', matrix=evolution_matrix(h, t),
                       label='exp(2pi i {:.6g} H)'.format(t))


def rotation_arguments(string, qubits):
    """Return (label, targets) for a rotation about `string` restricted to its support."""
    support = string.support
    targets = [qubits[q] for q in support]
    label = ''.join(string.axis(q) for q in reversed(support))
    return label, targets


def _check_real(h):
    if not h.is_hermitian():
        raise errors.QpeValidationError(
            'Operator must be Hermitian (found complex coefficients)', subject=h)


def trotter_evolution_circuit(h, t, steps, qubits=None, n_qubits=None):
    """
    First-order product formula for exp(2πi t H).

    Each step applies exp(2πi (t/steps) c P) = R_P(-4π t c / steps) per term in label
    order. The identity term becomes a global phase on the first qubit.
    """
    if steps < 1:
        raise errors.QpeValidationError('steps must be at least 1, found {}'.format(steps))
    _check_real(h)
    qubits = _register(h, qubits)
    circuit = Circuit(n_qubits or (max(qubits) + 1 if qubits else 0), name='trotter')
    dt = t / steps
    for _ in range(steps):
        for coeff, string in h.terms:
            angle = 2 * math.pi * dt * coeff.real
            if string.is_identity():
                circuit.unitary(np.exp(1j * angle) * np.eye(2), [qubits[0]], label='gphase')
                continue
            label, targets = rotation_arguments(string, qubits)
            circuit.pauli_rotation(label, -2 * angle, targets)
    return circuit


def controlled_pauli_evolution(h, t, control, qubits=None, steps=1, n_qubits=None):
    """
    Controlled exp(2πi t H) built from Pauli rotations.

    Per term, exp(iφ (I - Z_c)/2 ⊗ P) = R_P(-φ) R_{Z_c P}(φ) with φ = 2π t c / steps; the
    identity term is a phase gate on the control.
    """
    if steps < 1:
        raise errors.QpeValidationError('steps must be at least 1, found {}'.format(steps))
    _check_real(h)
    qubits = _register(h, qubits)
    if control in qubits:
        raise errors.QpeValidationError(
            'Control qubit {} overlaps the evolved register'.format(control))
    width = n_qubits or max(qubits + [control]) + 1
    circuit = Circuit(width, name='c-evolution')
    for _ in range(steps):
        for coeff, string in h.terms:
            phi = 2 * math.pi * t * coeff.real / steps
            if string.is_identity():
                circuit.p(phi, control)
                continue
            label, targets = rotation_arguments(string, qubits)
            circuit.pauli_rotation(label, -phi, targets)
            circuit.pauli_rotation('Z' + label, phi, targets + [control])
    return circuit
