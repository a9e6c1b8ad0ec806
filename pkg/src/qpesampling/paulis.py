"""
Pauli strings and weighted Pauli sums.

Qubit 0 is the rightmost character of a printed string and the least-significant
bit of a basis label, so `PauliString('ZI')` acts with Z on qubit 1.

A string is stored with its symplectic masks: bit q of `x_mask` is set for X or Y
on qubit q and bit q of `z_mask` for Z or Y, so that P = i^{n_Y} X^x Z^z.
"""
import numbers

import numpy as np

from . import checks
from . import context
from . import errors


PAULI_AXES = 'IXYZ'

_AXIS_FROM_BITS = {(0, 0): 'I', (1, 0): 'X', (0, 1): 'Z', (1, 1): 'Y'}


def _popcount(value):
    return bin(value).count('1')


def _bit_parity(indices, mask):
    parity = np.zeros(indices.shape, dtype=np.int64)
    q = 0
    while mask >> q:
        if (mask >> q) & 1:
            parity ^= (indices >> q) & 1
        q += 1
    return parity


class PauliString(object):
    """A tensor product of single-qubit Pauli axes."""

    __slots__ = ('label', 'x_mask', 'z_mask')

    def __init__(self, label):
        """Validate the label and derive the symplectic masks."""
        if isinstance(label, PauliString):
            label = label.label
        if not label or any(axis not in PAULI_AXES for axis in label):
            raise errors.QpeValidationError(
                'Pauli label must be a non-empty string over IXYZ, found {!r}'.format(label))
        self.label = label
        n = len(label)
        x_mask = z_mask = 0
        for q in range(n):
            axis = label[n - 1 - q]
            if axis in 'XY':
                x_mask |= 1 << q
            if axis in 'ZY':
                z_mask |= 1 << q
        self.x_mask = x_mask
        self.z_mask = z_mask

    @classmethod
    def identity(cls, n_qubits):
        return cls('I' * n_qubits)

    @classmethod
    def from_axes(cls, axes, n_qubits):
        """Build a string from a mapping of qubit index to axis."""
        chars = ['I'] * n_qubits
        for qubit, axis in axes.items():
            if not 0 <= qubit < n_qubits:
                raise errors.QpeValidationError(
                    'Qubit {} out of range for {} qubits'.format(qubit, n_qubits))
            chars[n_qubits - 1 - qubit] = axis
        return cls(''.join(chars))

    @classmethod
    def from_masks(cls, x_mask, z_mask, n_qubits):
        return cls(''.join(
            _AXIS_FROM_BITS[((x_mask >> q) & 1, (z_mask >> q) & 1)]
            for q in reversed(range(n_qubits))))

    @property
    def n_qubits(self):
        """Return the number of qubits the string acts on."""
        return len(self.label)

    @property
    def n_y(self):
        return _popcount(self.x_mask & self.z_mask)

    @property
    def weight(self):
        """Return the number of non-identity factors."""
        return _popcount(self.x_mask | self.z_mask)

    @property
    def support(self):
        """Return the qubits carrying a non-identity factor, ascending."""
        return [q for q in range(self.n_qubits) if (self.x_mask | self.z_mask) >> q & 1]

    def axis(self, qubit):
        """Return the axis acting on `qubit`."""
        return self.label[self.n_qubits - 1 - qubit]

    def is_identity(self):
        return not (self.x_mask or self.z_mask)

    def commutes_with(self, other):
        """Return whether the two strings commute."""
        overlap = _popcount(self.x_mask & other.z_mask) + _popcount(self.z_mask & other.x_mask)
        return overlap % 2 == 0

    def multiply(self, other):
        """Return (phase, string) with self * other = phase * string."""
        if other.n_qubits != self.n_qubits:
            raise errors.QpeValidationError(
                'Cannot multiply Pauli strings on {} and {} qubits'.format(
                    self.n_qubits, other.n_qubits))
        x_mask = self.x_mask ^ other.x_mask
        z_mask = self.z_mask ^ other.z_mask
        product = PauliString.from_masks(x_mask, z_mask, self.n_qubits)
        power = (self.n_y + other.n_y - product.n_y) % 4
        phase = 1j ** power
        if _popcount(self.z_mask & other.x_mask) % 2:
            phase = -phase
        return phase, product

    def insert_qubit(self, position, axis='I'):
        """Return the string with a new qubit at `position`; higher qubits shift up."""
        cut = self.n_qubits - position
        return PauliString(self.label[:cut] + axis + self.label[cut:])

    def remove_qubit(self, position):
        """Return the string with qubit `position` dropped."""
        cut = self.n_qubits - 1 - position
        return PauliString(self.label[:cut] + self.label[cut + 1:])

    def to_matrix(self):
        return PauliOperator({self.label: 1.0}).to_matrix()

    def __eq__(self, other):
        if isinstance(other, str):
            return self.label == other
        return isinstance(other, PauliString) and self.label == other.label

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.label)

    def __len__(self):
        return self.n_qubits

    def __str__(self):
        return self.label

    def __repr__(self):
        return 'PauliString({!r})'.format(self.label)


class PauliOperator(object):
    """
    A weighted sum of Pauli strings over a fixed number of qubits.

    The term table is canonical at all times: duplicate strings are merged by
    adding coefficients and coefficients below the active prune tolerance are
    dropped.
    """

    def __init__(self, terms=None, n_qubits=None):
        """Accept a dict of label -> coefficient or an iterable of (coefficient, string)."""
        if terms is None:
            terms = ()
        items = terms.items() if isinstance(terms, dict) else (
            (string, coeff) for coeff, string in terms)
        table = {}
        for string, coeff in items:
            string = PauliString(string)
            if n_qubits is None:
                n_qubits = string.n_qubits
            elif string.n_qubits != n_qubits:
                raise errors.QpeValidationError(
                    'All Pauli strings must act on {} qubits, found {!r}'.format(
                        n_qubits, string.label))
            table[string.label] = table.get(string.label, 0.0) + complex(coeff)
        if n_qubits is None:
            raise errors.QpeValidationError('n_qubits is required for an empty operator')
        self.n_qubits = n_qubits
        tolerance = context.get_setting('prune_tolerance')
        self._terms = {
            label: coeff for label, coeff in table.items() if abs(coeff) >= tolerance}

    @classmethod
    def zero(cls, n_qubits):
        return cls({}, n_qubits=n_qubits)

    @classmethod
    def identity(cls, n_qubits, coeff=1.0):
        return cls({'I' * n_qubits: coeff}, n_qubits=n_qubits)

    @classmethod
    def from_string(cls, string, coeff=1.0):
        string = PauliString(string)
        return cls({string.label: coeff}, n_qubits=string.n_qubits)

    @property
    def terms(self):
        """Return the (coefficient, PauliString) pairs sorted by label."""
        return [(self._terms[label], PauliString(label)) for label in sorted(self._terms)]

    def coefficient(self, string):
        """Return the coefficient of a string (zero when absent)."""
        return self._terms.get(PauliString(string).label, 0.0)

    def canonicalize(self):
        """Return a canonical copy; construction already canonicalizes."""
        return PauliOperator(dict(self._terms), n_qubits=self.n_qubits)

    def is_zero(self):
        return not self._terms

    def is_hermitian(self, tolerance=None):
        """Return whether every canonical coefficient is real."""
        tolerance = context.get_setting('prune_tolerance') if tolerance is None else tolerance
        return all(abs(coeff.imag) <= tolerance for coeff in self._terms.values())

    def adjoint(self):
        return PauliOperator(
            {label: coeff.conjugate() for label, coeff in self._terms.items()},
            n_qubits=self.n_qubits)

    def real(self):
        """Return the operator with imaginary parts of coefficients dropped."""
        return PauliOperator(
            {label: coeff.real for label, coeff in self._terms.items()}, n_qubits=self.n_qubits)

    def commutator(self, other):
        return self * other - other * self

    def commutes_with(self, other, tolerance=1e-10):
        """Return whether [self, other] vanishes."""
        other = _as_operator(other, self.n_qubits)
        table = {}
        for c1, p1 in self.terms:
            for c2, p2 in other.terms:
                if p1.commutes_with(p2):
                    continue
                phase, product = p1.multiply(p2)
                table[product.label] = table.get(product.label, 0.0) + 2 * phase * c1 * c2
        return all(abs(value) <= tolerance for value in table.values())

    def insert_qubit(self, position, axis='I'):
        return PauliOperator(
            {PauliString(label).insert_qubit(position, axis).label: coeff
             for label, coeff in self._terms.items()},
            n_qubits=self.n_qubits + 1)

    def tensor(self, other):
        """Return self ⊗ other with `other` on the low qubits."""
        table = {}
        for c1, p1 in self.terms:
            for c2, p2 in other.terms:
                label = p1.label + p2.label
                table[label] = table.get(label, 0.0) + c1 * c2
        return PauliOperator(table, n_qubits=self.n_qubits + other.n_qubits)

    def to_matrix(self):
        """Return the dense matrix of the operator."""
        return pauli_to_matrix(self)

    def apply(self, amplitudes):
        """Return the operator applied to a dense amplitude vector."""
        amplitudes = np.asarray(amplitudes, dtype=complex)
        indices = np.arange(2 ** self.n_qubits)
        out = np.zeros_like(amplitudes)
        for coeff, string in self.terms:
            signs = 1 - 2 * _bit_parity(indices, string.z_mask)
            out[indices ^ string.x_mask] += coeff * (1j ** string.n_y) * signs * amplitudes
        return out

    def expectation(self, amplitudes):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        return complex(np.vdot(amplitudes, self.apply(amplitudes)))

    def allclose(self, other, atol=1e-10):
        other = _as_operator(other, self.n_qubits)
        difference = self - other
        return all(abs(coeff) <= atol for coeff, _ in difference.terms)

    def __add__(self, other):
        other = _as_operator(other, self.n_qubits)
        if other.n_qubits != self.n_qubits:
            raise errors.QpeValidationError(
                'Cannot add operators on {} and {} qubits'.format(self.n_qubits, other.n_qubits))
        table = dict(self._terms)
        for label, coeff in other._terms.items():
            table[label] = table.get(label, 0.0) + coeff
        return PauliOperator(table, n_qubits=self.n_qubits)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-_as_operator(other, self.n_qubits))

    def __rsub__(self, other):
        return _as_operator(other, self.n_qubits) - self

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return PauliOperator(
                {label: coeff * other for label, coeff in self._terms.items()},
                n_qubits=self.n_qubits)
        other = _as_operator(other, self.n_qubits)
        table = {}
        for c1, p1 in self.terms:
            for c2, p2 in other.terms:
                phase, product = p1.multiply(p2)
                table[product.label] = table.get(product.label, 0.0) + phase * c1 * c2
        return PauliOperator(table, n_qubits=self.n_qubits)

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self * other
        return _as_operator(other, self.n_qubits) * self

    def __truediv__(self, other):
        return self * (1.0 / other)

    def __eq__(self, other):
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self._terms == other._terms

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    __hash__ = None

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.terms)

    def __repr__(self):
        body = ' + '.join('({:.6g})*{}'.format(coeff, string) for coeff, string in self.terms)
        return 'PauliOperator({}, n_qubits={})'.format(body or '0', self.n_qubits)


def _as_operator(value, n_qubits):
    if isinstance(value, PauliOperator):
        return value
    if isinstance(value, (PauliString, str)):
        return PauliOperator.from_string(value)
    if isinstance(value, numbers.Number):
        return PauliOperator.identity(n_qubits, value)
    raise TypeError('Cannot interpret {!r} as a Pauli operator'.format(value))


@checks.dense_limited
def pauli_to_matrix(operator):
    """Return the dense Kronecker-product expansion of a Pauli operator."""
    dim = 2 ** operator.n_qubits
    matrix = np.zeros((dim, dim), dtype=complex)
    columns = np.arange(dim)
    for coeff, string in operator.terms:
        signs = 1 - 2 * _bit_parity(columns, string.z_mask)
        matrix[columns ^ string.x_mask, columns] += coeff * (1j ** string.n_y) * signs
    return matrix
