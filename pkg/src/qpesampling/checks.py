"""Decorators that guard numerical kernels against oversized or non-Hermitian input."""
import decorator

from . import context
from . import errors


def _width(obj):
    return getattr(obj, 'n_qubits', obj)


@decorator.decorator
def dense_limited(inner_fn, subject, *args, **kwargs):
    """
    Reject a subject wider than the active dense limit.

    The first positional argument must expose `n_qubits` (operators, states,
    circuits) or be the qubit count itself.
    """
    limit = context.get_setting('dense_limit')
    n_qubits = _width(subject)
    if n_qubits > limit:
        raise errors.QpeDenseLimitError(n_qubits, limit, subject=subject)
    return inner_fn(subject, *args, **kwargs)


@decorator.decorator
def hermitian_required(inner_fn, operator, *args, **kwargs):
    """Reject an operator whose canonical coefficients are not all real."""
    if not operator.is_hermitian():
        raise errors.QpeValidationError(
            'Operator must be Hermitian (found complex coefficients)', subject=operator)
    return inner_fn(operator, *args, **kwargs)
