"""
Fermionic ladder operators, the Jordan-Wigner map and Hamiltonian assembly.

Spin orbitals are addressed as (mode, spin). Under the default `blocked` ordering
all alpha modes come first, so (mode, spin) sits on qubit mode + spin * n_modes;
the `interleaved` ordering puts it on qubit 2 * mode + spin.
"""
import collections
import functools
import numbers

import numpy as np

from . import context
from . import errors
from .paulis import PauliOperator, PauliString


ALPHA = 0
BETA = 1
SPINS = (ALPHA, BETA)

SPIN_ORDERINGS = ('blocked', 'interleaved')

TENSOR_TOLERANCE = 1e-10

LadderOp = collections.namedtuple('LadderOp', ['mode', 'spin', 'dagger'])


def qubit_index(mode, spin, n_modes, spin_ordering='blocked'):
    """Return the qubit holding the spin orbital (mode, spin)."""
    if spin_ordering == 'blocked':
        return mode + spin * n_modes
    if spin_ordering == 'interleaved':
        return 2 * mode + spin
    raise errors.QpeValidationError(
        'Unknown spin ordering {!r}; expected one of {}'.format(spin_ordering, SPIN_ORDERINGS))


class FermionOperator(object):
    """A weighted sum of products of ladder operators over `n_modes` spatial modes."""

    def __init__(self, terms=None, n_modes=None):
        """Accept a dict of product -> coefficient or an iterable of (coefficient, product)."""
        if n_modes is None:
            raise errors.QpeValidationError('n_modes is required for a fermion operator')
        if terms is None:
            terms = ()
        items = terms.items() if isinstance(terms, dict) else (
            (product, coeff) for coeff, product in terms)
        table = {}
        problems = []
        for product, coeff in items:
            product = tuple(LadderOp(*op) for op in product)
            for op in product:
                if not 0 <= op.mode < n_modes:
                    problems.append('Mode {} out of range for {} modes'.format(op.mode, n_modes))
                if op.spin not in SPINS:
                    problems.append('Spin must be ALPHA (0) or BETA (1), found {!r}'.format(op.spin))
            table[product] = table.get(product, 0.0) + complex(coeff)
        if problems:
            raise errors.QpeValidationError(sorted(set(problems)))
        self.n_modes = n_modes
        tolerance = context.get_setting('prune_tolerance')
        self._terms = {
            product: coeff for product, coeff in table.items() if abs(coeff) >= tolerance}

    @classmethod
    def zero(cls, n_modes):
        return cls({}, n_modes=n_modes)

    @classmethod
    def ladder(cls, mode, spin, dagger, n_modes, coeff=1.0):
        return cls({(LadderOp(mode, spin, dagger),): coeff}, n_modes=n_modes)

    @classmethod
    def hopping(cls, i, spin_i, j, spin_j, n_modes, coeff=1.0):
        """Return coeff * a†_{i spin_i} a_{j spin_j}."""
        product = (LadderOp(i, spin_i, True), LadderOp(j, spin_j, False))
        return cls({product: coeff}, n_modes=n_modes)

    @property
    def terms(self):
        """Return the (coefficient, product) pairs in a stable order."""
        return [(self._terms[product], product) for product in sorted(self._terms)]

    def is_zero(self):
        return not self._terms

    def canonicalize(self):
        return FermionOperator(dict(self._terms), n_modes=self.n_modes)

    def adjoint(self):
        table = {}
        for product, coeff in self._terms.items():
            flipped = tuple(LadderOp(op.mode, op.spin, not op.dagger) for op in reversed(product))
            table[flipped] = table.get(flipped, 0.0) + coeff.conjugate()
        return FermionOperator(table, n_modes=self.n_modes)

    def __add__(self, other):
        if other.n_modes != self.n_modes:
            raise errors.QpeValidationError(
                'Cannot add operators on {} and {} modes'.format(self.n_modes, other.n_modes))
        table = dict(self._terms)
        for product, coeff in other._terms.items():
            table[product] = table.get(product, 0.0) + coeff
        return FermionOperator(table, n_modes=self.n_modes)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return FermionOperator(
                {product: coeff * other for product, coeff in self._terms.items()},
                n_modes=self.n_modes)
        table = {}
        for p1, c1 in self._terms.items():
            for p2, c2 in other._terms.items():
                table[p1 + p2] = table.get(p1 + p2, 0.0) + c1 * c2
        return FermionOperator(table, n_modes=self.n_modes)

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if not isinstance(other, FermionOperator):
            return NotImplemented
        return self.n_modes == other.n_modes and self._terms == other._terms

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    __hash__ = None

    def __len__(self):
        return len(self._terms)

    def __repr__(self):
        def fmt(op):
            return 'a{}_{}{}'.format('^' if op.dagger else '', op.mode, 'ab'[op.spin])
        body = ' + '.join(
            '({:.6g})*{}'.format(coeff, ' '.join(fmt(op) for op in product))
            for coeff, product in self.terms)
        return 'FermionOperator({}, n_modes={})'.format(body or '0', self.n_modes)


@functools.lru_cache(maxsize=None)
def _ladder_pauli(qubit, dagger, n_qubits):
    z_string = {q: 'Z' for q in range(qubit)}
    x_part = PauliString.from_axes({**z_string, qubit: 'X'}, n_qubits)
    y_part = PauliString.from_axes({**z_string, qubit: 'Y'}, n_qubits)
    return PauliOperator({x_part.label: 0.5, y_part.label: 0.5j if not dagger else -0.5j},
                         n_qubits=n_qubits)


def jordan_wigner(operator, n_modes_per_spin=None, spin_ordering='blocked'):
    """
    Map a fermion operator onto 2 * n_modes_per_spin qubits.

    a_q = Z_0 ... Z_{q-1} (X_q + iY_q) / 2 and a†_q = Z_0 ... Z_{q-1} (X_q - iY_q) / 2,
    with occupied orbitals on |1>.
    """
    n_modes = operator.n_modes if n_modes_per_spin is None else n_modes_per_spin
    for _, product in operator.terms:
        for op in product:
            if op.mode >= n_modes:
                raise errors.QpeValidationError(
                    'Mode {} does not fit {} modes per spin'.format(op.mode, n_modes))
    n_qubits = 2 * n_modes
    result = PauliOperator.zero(n_qubits)
    for coeff, product in operator.terms:
        term = PauliOperator.identity(n_qubits, coeff)
        for op in product:
            qubit = qubit_index(op.mode, op.spin, n_modes, spin_ordering)
            term = term * _ladder_pauli(qubit, op.dagger, n_qubits)
        result = result + term
    return result


def majorana_operator(mode, spin, flavour, n_modes, spin_ordering='blocked'):
    """
    Return the Jordan-Wigner image of a Majorana operator.

    Flavour 0 is a + a† (Z string then X), flavour 1 is -i(a - a†) (Z string then Y).
    """
    qubit = qubit_index(mode, spin, n_modes, spin_ordering)
    axes = {q: 'Z' for q in range(qubit)}
    axes[qubit] = 'X' if flavour == 0 else 'Y'
    return PauliOperator.from_string(PauliString.from_axes(axes, 2 * n_modes))


def fermion_to_matrix(operator, n_modes_per_spin=None, spin_ordering='blocked'):
    """
    Build the occupation-basis matrix of a fermion operator directly.

    Independent of the Pauli algebra: each ladder operator acts on basis states
    with the sign of the occupied orbitals below it.
    """
    n_modes = operator.n_modes if n_modes_per_spin is None else n_modes_per_spin
    dim = 2 ** (2 * n_modes)
    matrix = np.zeros((dim, dim), dtype=complex)
    for coeff, product in operator.terms:
        qubits = [(qubit_index(op.mode, op.spin, n_modes, spin_ordering), op.dagger)
                  for op in product]
        for column in range(dim):
            state, sign = column, 1
            for qubit, dagger in reversed(qubits):
                occupied = (state >> qubit) & 1
                if occupied == dagger:
                    sign = 0
                    break
                if bin(state & ((1 << qubit) - 1)).count('1') % 2:
                    sign = -sign
                state ^= 1 << qubit
            if sign:
                matrix[state, column] += sign * coeff
    return matrix


def validate_one_body(t, name='t', tolerance=TENSOR_TOLERANCE):
    """Return problems found in a one-body matrix that must be Hermitian."""
    t = np.asarray(t)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        return ['{} must be a square matrix, found shape {}'.format(name, t.shape)]
    if not np.allclose(t, t.conj().T, atol=tolerance, rtol=0):
        return ['{} is not Hermitian within {}'.format(name, tolerance)]
    return []


def validate_eri(eri, n, tolerance=TENSOR_TOLERANCE):
    """Return problems found in a chemist-notation two-body tensor with 8-fold symmetry."""
    eri = np.asarray(eri)
    if eri.shape != (n, n, n, n):
        return ['eri must have shape {}, found {}'.format((n, n, n, n), eri.shape)]
    problems = []
    if np.iscomplexobj(eri) and np.abs(eri.imag).max(initial=0.0) > tolerance:
        problems.append('eri must be real')
    checks = [
        ('(ij|kl) = (ji|kl)', eri.transpose(1, 0, 2, 3)),
        ('(ij|kl) = (ij|lk)', eri.transpose(0, 1, 3, 2)),
        ('(ij|kl) = (kl|ij)', eri.transpose(2, 3, 0, 1)),
    ]
    for label, permuted in checks:
        if not np.allclose(eri, permuted, atol=tolerance, rtol=0):
            problems.append('eri violates {} within {}'.format(label, tolerance))
    return problems


def assemble_spin_free(t, eri):
    """
    Build the spin-free Hamiltonian from one- and two-body integrals.

    H = Σ t_ij a†_{iσ} a_{jσ} + ½ Σ (ij|kl) a†_{iσ} a†_{kτ} a_{lτ} a_{jσ}.
    """
    t = np.asarray(t)
    n = t.shape[0] if t.ndim == 2 else 0
    problems = validate_one_body(t)
    if not problems:
        problems = validate_eri(eri, n)
    if problems:
        raise errors.QpeValidationError(problems)
    eri = np.real(np.asarray(eri))
    table = {}
    for i, j in zip(*np.nonzero(t)):
        for spin in SPINS:
            product = (LadderOp(i, spin, True), LadderOp(j, spin, False))
            table[product] = table.get(product, 0.0) + t[i, j]
    for i, j, k, l in zip(*np.nonzero(eri)):
        for sigma in SPINS:
            for tau in SPINS:
                product = (LadderOp(i, sigma, True), LadderOp(k, tau, True),
                           LadderOp(l, tau, False), LadderOp(j, sigma, False))
                table[product] = table.get(product, 0.0) + 0.5 * eri[i, j, k, l]
    return FermionOperator(
        {tuple(LadderOp(int(op.mode), op.spin, op.dagger) for op in product): coeff
         for product, coeff in table.items()},
        n_modes=n)


def triplet_operators(i, j, n_modes):
    """Return the Cartesian triplet operators (T^X, T^Y, T^Z) for the orbital pair (i, j)."""
    up_down = FermionOperator.hopping(i, ALPHA, j, BETA, n_modes)
    down_up = FermionOperator.hopping(i, BETA, j, ALPHA, n_modes)
    up_up = FermionOperator.hopping(i, ALPHA, j, ALPHA, n_modes)
    down_down = FermionOperator.hopping(i, BETA, j, BETA, n_modes)
    t_x = (up_down + down_up) * 0.5
    t_y = (up_down - down_up) * (1 / 2j)
    t_z = (up_up - down_down) * 0.5
    return t_x, t_y, t_z


def assemble_mfso(h_mfso):
    """Build Σ_pq (h^X_pq T^X_pq + h^Y_pq T^Y_pq + h^Z_pq T^Z_pq) and check it is Hermitian."""
    components = [np.asarray(component) for component in h_mfso]
    if len(components) != 3:
        raise errors.QpeValidationError(
            'h_mfso needs x, y and z components, found {}'.format(len(components)))
    shapes = set(component.shape for component in components)
    if len(shapes) != 1 or any(
            component.ndim != 2 or component.shape[0] != component.shape[1]
            for component in components):
        raise errors.QpeValidationError(
            'h_mfso components must be square with equal dimensions, found {}'.format(
                sorted(shapes)))
    n = components[0].shape[0]
    result = FermionOperator.zero(n)
    for p in range(n):
        for q in range(n):
            if not any(component[p, q] for component in components):
                continue
            for component, triplet in zip(components, triplet_operators(p, q, n)):
                if component[p, q]:
                    result = result + triplet * complex(component[p, q])
    if not jordan_wigner(result).is_hermitian(tolerance=TENSOR_TOLERANCE):
        raise errors.QpeValidationError(
            'Mean-field spin-orbit operator is not Hermitian', subject=result)
    return result


def mfso_integrals(t_so, v_so, density):
    """
    Contract spin-orbit integrals with a density matrix, per Cartesian component.

    h_pq = t_pq + Σ_rs D_rs (v_pqrs - 3/2 (v_psrq + v_rqps)).
    """
    t_so = np.asarray(t_so)
    v_so = np.asarray(v_so)
    density = np.asarray(density)
    n = density.shape[0]
    if t_so.shape != (3, n, n) or v_so.shape != (3, n, n, n, n):
        raise errors.QpeValidationError(
            'Expected t_so of shape {} and v_so of shape {}, found {} and {}'.format(
                (3, n, n), (3, n, n, n, n), t_so.shape, v_so.shape))
    coulomb = np.einsum('rs,cpqrs->cpq', density, v_so)
    exchange = (np.einsum('rs,cpsrq->cpq', density, v_so)
                + np.einsum('rs,crqps->cpq', density, v_so))
    return t_so + coulomb - 1.5 * exchange
