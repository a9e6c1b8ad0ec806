"""
Amplitude encoding of arbitrary states with multiplexed rotations.

Magnitudes are loaded top-down: qubit q gets R_Y(θ_j) selected by the value j of
the qubits above it. Phases are then fixed bottom-up with multiplexed R_Z gates,
each level passing the mean phase of every pair to the level above; the final
mean is a global phase and is dropped.
"""
import math

import numpy as np
import scipy.linalg

from .circuits import Circuit
from .simulator import StateVector


ANGLE_TOLERANCE = 1e-12


def _magnitude_angles(magnitudes, qubit, n_qubits):
    blocks = (magnitudes ** 2).reshape(2 ** (n_qubits - 1 - qubit), 2, 2 ** qubit).sum(axis=2)
    return [2 * math.atan2(math.sqrt(r1), math.sqrt(r0)) for r0, r1 in blocks]


def _append_multiplexor(circuit, axis, thetas, qubit, n_qubits):
    if all(abs(theta) < ANGLE_TOLERANCE for theta in thetas):
        return
    if len(thetas) == 1:
        circuit.gate('r' + axis, [qubit], [thetas[0]])
    else:
        circuit.multiplexed_rotation(axis, thetas, list(range(qubit, n_qubits)))


def amplitude_encode(target):
    """Return a circuit mapping |0...0> to `target` up to a global phase."""
    if not isinstance(target, StateVector):
        target = StateVector(target)
    n = target.n_qubits
    circuit = Circuit(n, name='amplitude_encode')
    magnitudes = np.abs(target.amplitudes)
    for qubit in reversed(range(n)):
        _append_multiplexor(circuit, 'y', _magnitude_angles(magnitudes, qubit, n), qubit, n)
    phases = np.where(magnitudes > ANGLE_TOLERANCE, np.angle(target.amplitudes), 0.0)
    for qubit in range(n):
        pairs = phases.reshape(-1, 2)
        _append_multiplexor(circuit, 'z', list(pairs[:, 1] - pairs[:, 0]), qubit, n)
        phases = pairs.mean(axis=1)
    return circuit


def walsh_coefficients(thetas):
    """
    Return c_S with θ_j = Σ_S c_S (-1)^{|j & S|}.

    The selector subset S is encoded as an integer over the control qubits.
    """
    thetas = np.asarray(thetas, dtype=float)
    return scipy.linalg.hadamard(len(thetas)) @ thetas / len(thetas)


def multiplexor_rotations(axis, thetas, targets):
    """
    Decompose a multiplexed rotation into commuting Pauli rotations.

    Returns [(label, angle, targets)] with one R_{Z_S ⊗ A}(c_S) per nonzero Walsh
    coefficient; targets[0] carries the rotation axis A.
    """
    rotations = []
    controls = list(targets[1:])
    for subset, coeff in enumerate(walsh_coefficients(thetas)):
        if abs(coeff) < ANGLE_TOLERANCE:
            continue
        chosen = [q for bit, q in enumerate(controls) if subset >> bit & 1]
        label = 'Z' * len(chosen) + axis.upper()
        rotations.append((label, float(coeff), [targets[0]] + chosen))
    return rotations
