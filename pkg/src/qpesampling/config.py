"""Run configuration: a JSON file per command, overridden field by field from the command line."""
import json
import logging

from . import errors
from . import qpe
from .typeddict import NUMBER, TypedDict


logger = logging.getLogger(__name__)

COMMANDS = ('spectrum', 'simulate', 'qed', 'fit-discard', 'compare')

DIPOLE_FORMATS = ('pauli', 'tensor')

DEFAULTS = {
    'seed': 0,
    'out': '.',
    'variant': qpe.UNIFORM,
    'eta': 0.3,
    'shots': 1000,
    'shift': 0.0,
    'evolution': 'exact',
    'trotter_steps': 1,
    'p2': 0.0,
    'n_omega': 1024,
    'dipole_format': 'pauli',
    'dipole_path': 'direct',
}

_QPE_FIELDS = {
    'n_q': int,
    'omega_min': NUMBER,
    'omega_max': NUMBER,
}

_QPE_OPTIONAL = {
    'variant': str,
    'a': NUMBER,
    'e_ref': NUMBER,
    'eta': NUMBER,
    'n_omega': int,
    'shift': NUMBER,
    'seed': int,
    'out': str,
}

_SYSTEM_INPUTS = {
    'hamiltonian': str,
    'dipoles': list,
    'dipole_format': str,
    'dipole_path': str,
    'ground': str,
}

_NOISE = {
    'shots': int,
    'p2': NUMBER,
    'p_spam': NUMBER,
    'evolution': str,
    'trotter_steps': int,
}


class RunConfig(TypedDict):
    """Fields of one command run; see `required_fields` and `optional_fields`."""

    required_fields = {
        'spectrum': dict(_QPE_FIELDS),
        'simulate': dict(_QPE_FIELDS, hamiltonian=str),
        'qed': dict(_QPE_FIELDS, hamiltonian=str),
        'fit-discard': {'points': str},
        'compare': {'spectrum_a': str, 'spectrum_b': str},
    }

    optional_fields = {
        'spectrum': dict(_QPE_OPTIONAL, spectrum=str, shots=int, **_SYSTEM_INPUTS),
        'simulate': dict(_QPE_OPTIONAL, dynamic=bool, **dict(_SYSTEM_INPUTS, **_NOISE)),
        'qed': dict(_QPE_OPTIONAL, syndrome_period=int, **dict(_SYSTEM_INPUTS, **_NOISE)),
        'fit-discard': {'out': str},
        'compare': {'out': str},
    }

    # analytic spectra sample only when shots are given explicitly
    no_defaults = {'spectrum': ('shots',)}

    command_defaults = {'qed': {'evolution': 'pauli'}}

    type_error_message = 'Command "{type}" does not exist'

    def __init__(self, command, **fields):
        """Fill defaults for the command, check field types, then check value ranges."""
        defaults = {key: value for key, value in DEFAULTS.items()
                    if key in self.optional_fields.get(command, {})
                    and key not in self.no_defaults.get(command, ())}
        defaults.update(self.command_defaults.get(command, {}))
        defaults.update({key: value for key, value in fields.items() if value is not None})
        super(RunConfig, self).__init__(command, **defaults)
        problems = self.validate()
        if problems:
            raise errors.QpeConfigError(problems, subject=dict(self))

    @property
    def command(self):
        return self.type

    def validate(self):
        """Return every range and consistency problem of the configured values."""
        problems = []
        if self.command in ('fit-discard', 'compare'):
            return problems
        if self.command == 'spectrum':
            has_spectrum = 'spectrum' in self
            has_system = 'hamiltonian' in self or 'dipoles' in self
            if has_spectrum == has_system:
                problems.append(
                    'Provide either an eigenspectrum file or a hamiltonian with dipoles')
            elif has_system and not ('hamiltonian' in self and self.get('dipoles')):
                problems.append('A hamiltonian input needs at least one dipole file')
        if self.command in ('simulate', 'qed') and not (self.get('dipoles') or 'ground' in self):
            problems.append('Provide dipole files or a ground-state vector as the system input')
        for field in ('shots', 'trotter_steps', 'n_omega', 'syndrome_period'):
            if field in self and self[field] < 1:
                problems.append('{} must be at least 1, found {}'.format(field, self[field]))
        for field in ('p2', 'p_spam'):
            if field in self and not 0 <= self[field] <= 1:
                problems.append('{} must lie in [0, 1], found {}'.format(field, self[field]))
        if self.get('dipole_format', 'pauli') not in DIPOLE_FORMATS:
            problems.append('dipole_format must be one of {}'.format(DIPOLE_FORMATS))
        if self.get('evolution', 'exact') not in qpe.EVOLUTIONS:
            problems.append('evolution must be one of {}'.format(qpe.EVOLUTIONS))
        if self.command == 'qed' and self.get('evolution') != 'pauli':
            problems.append('qed lowers the circuit to Pauli rotations; evolution must be pauli')
        if self.get('dynamic') and self.get('variant') == qpe.EPE:
            problems.append(
                'The epe input state is entangled across ancillas; dynamic circuits need the '
                'uniform or slater variant')
        if self.command == 'qed' and self.get('variant') == qpe.EPE:
            problems.append('qed runs the dynamic circuit, which needs the uniform or slater variant')
        if not problems:
            try:
                self.qpe_config()
            except errors.QpeConfigError as error:
                problems.extend(error.errors)
        return problems

    def qpe_config(self, e_ref=None):
        """Build the QpeConfig; a slater run without `a` derives it from eta."""
        a = self.get('a')
        window = self['omega_max'] - self['omega_min']
        if self.get('variant') == qpe.SLATER and a is None:
            a = qpe.decay_rate_for_broadening(self['eta'], window)
        return qpe.QpeConfig(
            self['n_q'], self['omega_min'], self['omega_max'], variant=self.get('variant'),
            a=a, e_ref=self.get('e_ref', 0.0) if e_ref is None else e_ref)


def load_config(path):
    """Read a JSON object of run fields."""
    try:
        with open(path) as config_file:
            fields = json.load(config_file)
    except OSError as error:
        raise errors.QpeInputError(path, error.strerror or str(error))
    except ValueError as error:
        raise errors.QpeInputError(path, 'invalid JSON ({})'.format(error))
    if not isinstance(fields, dict):
        raise errors.QpeInputError(path, 'expected a JSON object')
    return fields


def merge_overrides(fields, **overrides):
    """Return config fields with every non-None override applied; overrides win."""
    merged = dict(fields)
    merged.update({key: value for key, value in overrides.items() if value is not None})
    return merged


def build_run_config(command, config_path=None, **overrides):
    fields = load_config(config_path) if config_path else {}
    logger.debug('Run config for %s from %s with overrides %s', command, config_path, overrides)
    return RunConfig(command, **merge_overrides(fields, **overrides))
