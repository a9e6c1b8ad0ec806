"""
Z2 symmetry tapering.

A Pauli symmetry P with Z or Y on the target qubit q is rotated onto X_q by the
Hermitian Clifford U = (X_q + P) / √2, so U P U = X_q. An operator commuting with P
becomes block-diagonal in the X basis of q; fixing the ±1 sector removes q.
"""
import math

from . import errors
from .paulis import PauliOperator, PauliString


SECTORS = (1, -1)

# <p| axis |q> in the X eigenbasis of the tapered qubit.
_SECTOR_ELEMENTS = {
    'I': {(1, 1): 1, (-1, -1): 1},
    'X': {(1, 1): 1, (-1, -1): -1},
    'Z': {(1, -1): 1, (-1, 1): 1},
    'Y': {(1, -1): 1j, (-1, 1): -1j},
}


class SymmetrySpec(object):
    """A single-string symmetry, the qubit it is tapered onto and the chosen sector."""

    def __init__(self, symmetry, target_qubit=None, sector=1):
        """Validate the symmetry and pick the lowest Z/Y qubit when no target is given."""
        symmetry = PauliString(symmetry)
        problems = []
        if symmetry.is_identity():
            problems.append('Symmetry string must not be all identity')
        if sector not in SECTORS:
            problems.append('Sector must be +1 or -1, found {!r}'.format(sector))
        candidates = [q for q in symmetry.support if symmetry.axis(q) in 'ZY']
        if target_qubit is None and candidates:
            target_qubit = candidates[0]
        if not symmetry.is_identity() and target_qubit not in candidates:
            problems.append(
                'Symmetry {} has no Z or Y on target qubit {}'.format(symmetry, target_qubit))
        if problems:
            raise errors.QpeValidationError(problems, subject=symmetry)
        self.symmetry = symmetry
        self.target_qubit = target_qubit
        self.sector = sector

    @property
    def n_qubits(self):
        return self.symmetry.n_qubits

    def with_sector(self, sector):
        return SymmetrySpec(self.symmetry, self.target_qubit, sector)

    def clifford(self):
        """Return U = (X_q + P) / √2 as a Pauli operator; U is its own inverse."""
        x_target = PauliString.from_axes({self.target_qubit: 'X'}, self.n_qubits)
        return PauliOperator({x_target.label: 1.0, self.symmetry.label: 1.0}) * (1 / math.sqrt(2))

    def transform(self, operator):
        """Return U O U for the symmetry's Clifford."""
        clifford = self.clifford()
        return clifford * operator * clifford

    def __repr__(self):
        return 'SymmetrySpec({!r}, target_qubit={}, sector={:+d})'.format(
            self.symmetry.label, self.target_qubit, self.sector)


def _check_commutes(operator, spec):
    if operator.n_qubits != spec.n_qubits:
        raise errors.QpeValidationError(
            'Operator acts on {} qubits but the symmetry on {}'.format(
                operator.n_qubits, spec.n_qubits))
    if not operator.commutes_with(PauliOperator.from_string(spec.symmetry)):
        raise errors.QpeValidationError(
            'Operator does not commute with symmetry {}'.format(spec.symmetry), subject=operator)


def _sector_blocks(transformed, target):
    blocks = {(p, q): {} for p in SECTORS for q in SECTORS}
    for coeff, string in transformed.terms:
        reduced = string.remove_qubit(target).label
        for key, element in _SECTOR_ELEMENTS[string.axis(target)].items():
            blocks[key][reduced] = blocks[key].get(reduced, 0.0) + element * coeff
    n_reduced = transformed.n_qubits - 1
    return {key: PauliOperator(table, n_qubits=n_reduced) for key, table in blocks.items()}


def z2_taper(operator, spec):
    """Return the operator restricted to the chosen sector, on one qubit fewer."""
    _check_commutes(operator, spec)
    transformed = spec.transform(operator)
    for coeff, string in transformed.terms:
        if string.axis(spec.target_qubit) in 'YZ':
            raise errors.QpeExecutionError(
                'Transformed operator is not block-diagonal on qubit {}'.format(spec.target_qubit),
                subject=operator)
    return _sector_blocks(transformed, spec.target_qubit)[(spec.sector, spec.sector)]


def split_dipole_by_sector(dipole, spec):
    """
    Decompose U μ U as Σ_pq μ_pq ⊗ |p><q| over the sectors of the tapered qubit.

    Returns a dict keyed by (p, q) with p, q in (+1, -1); empty blocks are zero operators.
    """
    if dipole.n_qubits != spec.n_qubits:
        raise errors.QpeValidationError(
            'Dipole acts on {} qubits but the symmetry on {}'.format(
                dipole.n_qubits, spec.n_qubits))
    return _sector_blocks(spec.transform(dipole), spec.target_qubit)


def sector_projector(p, q, n_qubits, target_qubit):
    """Return |p><q| in the X basis of `target_qubit`, identity elsewhere."""
    single = {
        (1, 1): {'I': 0.5, 'X': 0.5},
        (-1, -1): {'I': 0.5, 'X': -0.5},
        (1, -1): {'Z': 0.5, 'Y': -0.5j},
        (-1, 1): {'Z': 0.5, 'Y': 0.5j},
    }[(p, q)]
    return PauliOperator(
        {PauliString.from_axes({target_qubit: axis}, n_qubits).label: coeff
         for axis, coeff in single.items()},
        n_qubits=n_qubits)


def reassemble_sectors(blocks, target_qubit):
    """Inverse of `split_dipole_by_sector`: Σ_pq μ_pq ⊗ |p><q| on the full register."""
    n_qubits = next(iter(blocks.values())).n_qubits + 1
    result = PauliOperator.zero(n_qubits)
    for (p, q), block in blocks.items():
        result = result + block.insert_qubit(target_qubit) * sector_projector(
            p, q, n_qubits, target_qubit)
    return result
