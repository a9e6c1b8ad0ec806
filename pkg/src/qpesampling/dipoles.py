"""
Dipole operators: Majorana normal form, basis-rotation circuits and input-state preparation.

A real symmetric dipole matrix μ = Σ_k ε_k u_k u_kᵀ over spatial orbitals maps to

    μ̂ = E_const + (i/2) Σ_k ε_k Σ_σ γ_{u_k,σ,0} γ_{u_k,σ,1},    E_const = tr(μ),

where γ_{u,σ,x} = Σ_p u_p γ_{p,σ,x}. Each pair term equals -Û† Z_q Û with Û the
rotation circuit taking γ_{0,σ,x} to γ_{u,σ,x} and q the qubit of (mode 0, σ), so μ̂
is a linear combination of unitaries with 1-norm |E_const| + Σ_k |ε_k|.
"""
import logging
import math

import numpy as np

from . import errors
from . import fermions
from .circuits import Circuit
from .encoding import amplitude_encode
from .fermions import FermionOperator, majorana_operator, qubit_index
from .paulis import PauliOperator, PauliString
from .simulator import StateVector, circuit_unitary, run_unitary


logger = logging.getLogger(__name__)

DIRECTIONS = ('x', 'y', 'z')

PATHS = ('direct', 'majorana', 'lcu')

SYMMETRY_TOLERANCE = 1e-12

ORTHONORMAL_TOLERANCE = 1e-10

FORBIDDEN_TOLERANCE = 1e-12


class DipoleMatrix(object):
    """One Cartesian component of the dipole operator over spatial orbitals."""

    def __init__(self, direction, entries):
        """Check the direction and that the entries form a real symmetric matrix."""
        entries = np.asarray(entries)
        problems = []
        if direction not in DIRECTIONS:
            problems.append('Direction must be one of {}, found {!r}'.format(DIRECTIONS, direction))
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            problems.append('Dipole matrix must be square, found shape {}'.format(entries.shape))
        elif np.iscomplexobj(entries) and np.abs(entries.imag).max(initial=0.0) > SYMMETRY_TOLERANCE:
            problems.append('Dipole matrix must be real')
        elif not np.allclose(entries, entries.T, atol=SYMMETRY_TOLERANCE, rtol=0):
            problems.append('Dipole matrix is not symmetric within {}'.format(SYMMETRY_TOLERANCE))
        if problems:
            raise errors.QpeValidationError(problems)
        self.direction = direction
        self.entries = np.real(entries).astype(float)

    @property
    def n_modes(self):
        return self.entries.shape[0]

    def to_fermion(self):
        """Return Σ_pq μ_pq a†_{pσ} a_{qσ} summed over both spins."""
        result = FermionOperator.zero(self.n_modes)
        for p, q in zip(*np.nonzero(self.entries)):
            for spin in fermions.SPINS:
                result = result + FermionOperator.hopping(
                    int(p), spin, int(q), spin, self.n_modes, self.entries[p, q])
        return result

    def to_pauli(self, spin_ordering='blocked'):
        return fermions.jordan_wigner(self.to_fermion(), spin_ordering=spin_ordering)

    def __repr__(self):
        return 'DipoleMatrix({!r}, n_modes={})'.format(self.direction, self.n_modes)


class MajoranaDipoleForm(object):
    """E_const plus (ε_k, u_k) pairs, sorted by descending |ε_k|."""

    def __init__(self, e_const, modes, spin_ordering='blocked'):
        """Check that the u_k are orthonormal and of equal length."""
        modes = [(float(eps), np.asarray(u, dtype=float)) for eps, u in modes]
        if not modes:
            raise errors.QpeValidationError('A Majorana dipole form needs at least one mode')
        vectors = np.array([u for _, u in modes])
        if vectors.ndim != 2 or not np.allclose(
                vectors @ vectors.T, np.eye(len(modes)), atol=ORTHONORMAL_TOLERANCE, rtol=0):
            raise errors.QpeValidationError('Mode vectors must be orthonormal')
        self.e_const = float(e_const)
        self.modes = modes
        self.spin_ordering = spin_ordering

    @property
    def n_modes(self):
        return len(self.modes[0][1])

    @property
    def n_qubits(self):
        return 2 * self.n_modes

    @property
    def lcu_norm(self):
        """Return λ = |E_const| + Σ_k |ε_k|."""
        return abs(self.e_const) + sum(abs(eps) for eps, _ in self.modes)

    def reconstruct(self):
        """Return Σ_k ε_k u_k u_kᵀ."""
        return sum(eps * np.outer(u, u) for eps, u in self.modes)

    def rotated_majorana(self, u, spin, flavour):
        """Return γ_{u,σ,x} = Σ_p u_p γ_{p,σ,x} as a Pauli operator."""
        result = PauliOperator.zero(self.n_qubits)
        for p, coeff in enumerate(u):
            if coeff:
                result = result + majorana_operator(
                    p, spin, flavour, self.n_modes, self.spin_ordering) * coeff
        return result

    def to_pauli(self):
        """Reassemble E_const + (i/2) Σ_k ε_k Σ_σ γ_{u_k,σ,0} γ_{u_k,σ,1}."""
        result = PauliOperator.identity(self.n_qubits, self.e_const)
        for eps, u in self.modes:
            for spin in fermions.SPINS:
                pair = self.rotated_majorana(u, spin, 0) * self.rotated_majorana(u, spin, 1)
                result = result + pair * (0.5j * eps)
        return result

    def pair_qubit(self, spin):
        return qubit_index(0, spin, self.n_modes, self.spin_ordering)

    def pair_unitary_circuit(self, u, spin):
        """Return the circuit of V = -Û† Z_q Û for one (u, σ) pair."""
        rotation = majorana_rotation_circuit(
            u, spin, combined=True, n_modes=self.n_modes, spin_ordering=self.spin_ordering)
        circuit = Circuit(self.n_qubits, name='pair_unitary')
        circuit.compose(rotation)
        circuit.z(self.pair_qubit(spin))
        circuit.compose(rotation.inverse())
        circuit.unitary(-np.eye(2), [0], label='sign')
        return circuit

    def lcu_terms(self):
        """Return [(weight, circuit)] with μ̂ = Σ weight · unitary and weights ≥ 0."""
        terms = []
        identity = Circuit(self.n_qubits, name='identity')
        if self.e_const:
            identity.unitary(np.sign(self.e_const) * np.eye(2), [0], label='sign')
            terms.append((abs(self.e_const), identity))
        for eps, u in self.modes:
            if not eps:
                continue
            for spin in fermions.SPINS:
                circuit = self.pair_unitary_circuit(u, spin)
                if eps < 0:
                    circuit.unitary(-np.eye(2), [0], label='sign')
                terms.append((abs(eps) / 2, circuit))
        return terms

    def __repr__(self):
        return 'MajoranaDipoleForm(e_const={:.6g}, n_modes={})'.format(self.e_const, self.n_modes)


def dipole_majorana_decompose(mu, spin_ordering='blocked'):
    """Diagonalize a dipole matrix into its Majorana normal form."""
    if not isinstance(mu, DipoleMatrix):
        mu = DipoleMatrix('x', mu)
    eigenvalues, vectors = np.linalg.eigh(mu.entries)
    order = np.argsort(-np.abs(eigenvalues), kind='stable')
    modes = [(eigenvalues[k], vectors[:, k]) for k in order]
    return MajoranaDipoleForm(np.trace(mu.entries), modes, spin_ordering)


def givens_angles(u):
    """
    Return θ_0..θ_{n-2} such that the rotation chain maps e_0 onto u.

    θ_p = atan2(|u_{p+1:}|, u_p) except the last, which keeps the sign of u_{n-1}.
    """
    u = np.asarray(u, dtype=float)
    n = len(u)
    angles = []
    for p in range(n - 1):
        if p == n - 2:
            angles.append(math.atan2(u[n - 1], u[n - 2]))
        else:
            angles.append(math.atan2(np.linalg.norm(u[p + 1:]), u[p]))
    return angles


def _pair_label(low, high):
    """Return {flavour: label} over qubits low..high for the mode pair rotation."""
    middle = 'Z' * (high - low - 1)
    return {0: 'X' + middle + 'Y', 1: 'Y' + middle + 'X'}


def majorana_rotation_circuit(u, spin, flavour=0, combined=False, n_modes=None,
                              spin_ordering='blocked'):
    """
    Build Û with Û† γ_{0,σ,x} Û = γ_{u,σ,x}.

    Gates act on neighbouring modes from the top pair down to (0, 1). Without
    `combined` each gate rotates only flavour x; with it both flavours rotate
    together through a single Givens gate.
    """
    u = np.asarray(u, dtype=float)
    norm = np.linalg.norm(u)
    if norm == 0:
        raise errors.QpeValidationError('Rotation target must be a nonzero vector')
    if abs(norm - 1) > ORTHONORMAL_TOLERANCE:
        raise errors.QpeValidationError('Rotation target must be a unit vector, norm {}'.format(norm))
    if flavour not in (0, 1):
        raise errors.QpeValidationError('Majorana flavour must be 0 or 1, found {!r}'.format(flavour))
    n_modes = len(u) if n_modes is None else n_modes
    circuit = Circuit(2 * n_modes, name='majorana_rotation')
    angles = givens_angles(u)
    for p in reversed(range(len(angles))):
        theta = angles[p]
        if theta == 0:
            continue
        low = qubit_index(p, spin, n_modes, spin_ordering)
        high = qubit_index(p + 1, spin, n_modes, spin_ordering)
        targets = list(range(low, high + 1))
        labels = _pair_label(low, high)
        if combined and high == low + 1:
            circuit.givens(theta, low, high)
            continue
        if combined or flavour == 0:
            circuit.pauli_rotation(labels[0], theta, targets)
        if combined or flavour == 1:
            circuit.pauli_rotation(labels[1], -theta, targets)
    return circuit


class DipoleInput(object):
    """The normalized excited input μ̂|Ψ⟩/‖μ̂|Ψ⟩‖ with its norm and path bookkeeping."""

    def __init__(self, state, norm_squared, path, success_probability=None):
        self.state = state
        self.norm_squared = float(norm_squared)
        self.path = path
        self.success_probability = success_probability

    @property
    def forbidden(self):
        """Return whether μ̂|Ψ⟩ vanishes, leaving no input state."""
        return self.state is None

    def __repr__(self):
        return 'DipoleInput(path={!r}, norm_squared={:.6g}, forbidden={})'.format(
            self.path, self.norm_squared, self.forbidden)


def _finish(vector, path, success_probability=None):
    norm_squared = float(np.vdot(vector, vector).real)
    if norm_squared < FORBIDDEN_TOLERANCE:
        logger.warning('Dipole transition is forbidden: |mu psi|^2 = %.3g', norm_squared)
        return DipoleInput(None, norm_squared, path, success_probability)
    return DipoleInput(StateVector(vector, normalize=True), norm_squared, path,
                       success_probability)


def _pauli_lcu_terms(operator):
    terms = []
    for coeff, string in operator.terms:
        circuit = Circuit(operator.n_qubits, name='pauli_term')
        phase = coeff / abs(coeff)
        matrix = phase * PauliString(string).to_matrix()
        circuit.unitary(matrix, list(range(operator.n_qubits)), label=string.label)
        terms.append((abs(coeff), circuit))
    return terms


def lcu_circuit(terms, n_system):
    """
    Build PREPARE† · SELECT · PREPARE over an index register above the system.

    PREPARE amplitude-encodes sqrt(w_l / λ); SELECT applies unitary l when the index
    register holds l.
    """
    weights = np.array([weight for weight, _ in terms], dtype=float)
    n_index = max(1, int(math.ceil(math.log2(len(terms)))))
    amplitudes = np.zeros(2 ** n_index)
    amplitudes[:len(terms)] = np.sqrt(weights / weights.sum())
    prepare = amplitude_encode(amplitudes)
    index = list(range(n_system, n_system + n_index))
    dim = 2 ** n_system
    select = np.zeros((dim * 2 ** n_index,) * 2, dtype=complex)
    for l in range(2 ** n_index):
        block = circuit_unitary(terms[l][1]) if l < len(terms) else np.eye(dim)
        select[l * dim:(l + 1) * dim, l * dim:(l + 1) * dim] = block
    circuit = Circuit(n_system + n_index, name='lcu')
    circuit.compose(prepare, qubits=index)
    circuit.unitary(select, list(range(n_system + n_index)), label='select')
    circuit.compose(prepare.inverse(), qubits=index)
    return circuit, n_index


def prepare_dipole_input(ground, mu_form, path='direct'):
    """
    Return the normalized dipole-excited input state and ‖μ̂|Ψ⟩‖².

    `direct` applies the Pauli operator, `majorana` sums E_const|Ψ⟩ and the pair
    unitaries run as circuits, `lcu` post-selects the index register of an LCU circuit
    on zero and reports the success probability. A vanishing μ̂|Ψ⟩ yields a result
    flagged `forbidden` with no state.
    """
    if path not in PATHS:
        raise errors.QpeValidationError('path must be one of {}, found {!r}'.format(PATHS, path))
    if not isinstance(ground, StateVector):
        ground = StateVector(ground)
    is_form = isinstance(mu_form, MajoranaDipoleForm)
    operator = mu_form.to_pauli() if is_form else mu_form
    if operator.n_qubits != ground.n_qubits:
        raise errors.QpeValidationError(
            'Dipole acts on {} qubits but the state has {}'.format(
                operator.n_qubits, ground.n_qubits))
    if path == 'direct':
        return _finish(operator.apply(ground.amplitudes), path)
    if path == 'majorana':
        if not is_form:
            raise errors.QpeValidationError('The majorana path needs a MajoranaDipoleForm')
        vector = mu_form.e_const * ground.amplitudes
        for eps, u in mu_form.modes:
            for spin in fermions.SPINS:
                pair = run_unitary(mu_form.pair_unitary_circuit(u, spin), ground)
                vector = vector + 0.5 * eps * pair.amplitudes
        return _finish(vector, path)
    terms = mu_form.lcu_terms() if is_form else _pauli_lcu_terms(operator)
    if not terms:
        return _finish(np.zeros_like(ground.amplitudes), path, 0.0)
    circuit, n_index = lcu_circuit(terms, ground.n_qubits)
    register = StateVector.zero(n_index).tensor(ground)
    output = run_unitary(circuit, register).amplitudes
    kept = output[:2 ** ground.n_qubits]
    success = float(np.vdot(kept, kept).real)
    lam = sum(weight for weight, _ in terms)
    result = _finish(kept * lam, path, success)
    logger.debug('LCU over %d terms: lambda=%.6g success=%.6g', len(terms), lam, success)
    return result
