"""
Plain-text inputs: Pauli operators, dense tensors, eigenspectra and state vectors.

Every reader raises `QpeInputError` naming the path and, for parse failures, the line.
"""
import logging

import numpy as np

from . import errors
from .paulis import PauliOperator, PauliString
from .qpe import EigenSpectrum
from .simulator import StateVector


logger = logging.getLogger(__name__)


def _read_lines(path):
    """Yield (line number, stripped line) pairs without comments or blank lines."""
    try:
        with open(path) as text_file:
            lines = text_file.readlines()
    except OSError as error:
        raise errors.QpeInputError(path, error.strerror or str(error))
    for number, line in enumerate(lines, 1):
        line = line.split('#', 1)[0].strip()
        if line:
            yield number, line


def _floats(path, number, fields):
    try:
        return [float(field) for field in fields]
    except ValueError:
        raise errors.QpeInputError(path, 'line {}: expected numbers, found {!r}'.format(
            number, ' '.join(fields)))


def read_pauli_operator(path):
    """Read `<re> <im> <string>` terms into a PauliOperator."""
    terms = []
    for number, line in _read_lines(path):
        fields = line.split()
        if len(fields) != 3:
            raise errors.QpeInputError(
                path, 'line {}: expected "<re> <im> <string>", found {!r}'.format(number, line))
        re, im = _floats(path, number, fields[:2])
        try:
            terms.append((complex(re, im), PauliString(fields[2])))
        except errors.QpeValidationError as error:
            raise errors.QpeInputError(path, 'line {}: {}'.format(number, error.errors[0]))
    if not terms:
        raise errors.QpeInputError(path, 'no Pauli terms')
    try:
        operator = PauliOperator(terms)
    except errors.QpeValidationError as error:
        raise errors.QpeInputError(path, error.errors[0])
    logger.debug('Read %d Pauli terms on %d qubits from %s',
                 len(operator), operator.n_qubits, path)
    return operator


def write_pauli_operator(path, operator):
    with open(path, 'w') as text_file:
        for coeff, string in operator.terms:
            text_file.write('{!r} {!r} {}\n'.format(
                float(coeff.real), float(coeff.imag), string.label))


def read_tensor(path):
    """Read a `<rank> <dims...>` header followed by row-major values, one per line."""
    lines = list(_read_lines(path))
    if not lines:
        raise errors.QpeInputError(path, 'empty tensor file')
    number, header = lines[0]
    try:
        shape = [int(field) for field in header.split()]
    except ValueError:
        raise errors.QpeInputError(path, 'line {}: malformed header {!r}'.format(number, header))
    if not shape or shape[0] != len(shape) - 1 or any(dim < 1 for dim in shape[1:]):
        raise errors.QpeInputError(
            path, 'header must be "<rank> <dims...>", found {!r}'.format(header))
    values = []
    for number, line in lines[1:]:
        fields = line.split()
        if len(fields) != 1:
            raise errors.QpeInputError(
                path, 'line {}: expected one value, found {!r}'.format(number, line))
        values.extend(_floats(path, number, fields))
    dims = tuple(shape[1:])
    expected = int(np.prod(dims))
    if len(values) != expected:
        raise errors.QpeInputError(
            path, 'expected {} values for shape {}, found {}'.format(expected, dims, len(values)))
    return np.array(values, dtype=float).reshape(dims)


def write_tensor(path, tensor):
    tensor = np.asarray(tensor, dtype=float)
    with open(path, 'w') as text_file:
        text_file.write(' '.join(str(value) for value in (tensor.ndim,) + tensor.shape) + '\n')
        for value in tensor.reshape(-1):
            text_file.write('{!r}\n'.format(float(value)))


def read_eigenspectrum(path):
    """Read `E w_x [w_y w_z]` rows; each weight column is one polarization."""
    rows = []
    for number, line in _read_lines(path):
        row = _floats(path, number, line.split())
        if len(row) < 2:
            raise errors.QpeInputError(
                path, 'line {}: expected an energy and at least one weight'.format(number))
        if rows and len(row) != len(rows[0]):
            raise errors.QpeInputError(
                path, 'line {}: found {} columns, expected {}'.format(
                    number, len(row), len(rows[0])))
        rows.append(row)
    if not rows:
        raise errors.QpeInputError(path, 'no eigenstates')
    table = np.array(rows)
    try:
        return EigenSpectrum(table[:, 0], table[:, 1:])
    except errors.QpeValidationError as error:
        raise errors.QpeInputError(path, '; '.join(error.errors))


def write_eigenspectrum(path, spec):
    with open(path, 'w') as text_file:
        for energy, weights in zip(spec.energies, spec.weights):
            text_file.write(' '.join('{!r}'.format(float(v)) for v in (energy,) + tuple(weights)))
            text_file.write('\n')


def read_state_vector(path):
    """Read one `<re> <im>` amplitude per line in basis order."""
    amplitudes = []
    for number, line in _read_lines(path):
        fields = line.split()
        if len(fields) != 2:
            raise errors.QpeInputError(
                path, 'line {}: expected "<re> <im>", found {!r}'.format(number, line))
        re, im = _floats(path, number, fields)
        amplitudes.append(complex(re, im))
    try:
        return StateVector(amplitudes)
    except errors.QpeValidationError as error:
        raise errors.QpeInputError(path, error.errors[0])


def write_state_vector(path, state):
    with open(path, 'w') as text_file:
        for amplitude in state.amplitudes:
            text_file.write('{!r} {!r}\n'.format(float(amplitude.real), float(amplitude.imag)))
