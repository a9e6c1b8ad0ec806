"""Minimal error classes that carry the offending object for introspection."""


class QpeError(Exception):
    """Base class for errors raised while building or running QPE workloads."""

    def __init__(self, error, subject=None, detail=None):
        """Save the subject and any detail to the exception for introspection."""
        self.subject = subject
        self.detail = detail
        super(QpeError, self).__init__(error)


class QpeValidationError(QpeError):
    """Class for errors related to invalid operators, circuits or parameters."""

    heading = 'Invalid input'

    def __init__(self, errors, subject=None, detail=None):
        """Create a message for a variable number of validation errors."""
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        error = '{}:\n  {}'.format(self.heading, '\n  '.join(self.errors))
        super(QpeValidationError, self).__init__(
            error, subject=subject, detail=detail)


class QpeConfigError(QpeValidationError):
    """Class for errors in a run configuration."""

    heading = 'Invalid configuration'


class QpeCompilationError(QpeValidationError):
    """Class for logical instructions the error-detection compiler cannot lower."""

    heading = 'Cannot compile logical circuit'


class QpeExecutionError(QpeError):
    """Class for errors related to executing circuits or numerical kernels."""

    pass


class QpeDenseLimitError(QpeExecutionError):
    """Class for dense objects wider than the active qubit limit."""

    def __init__(self, n_qubits=None, limit=None, subject=None):
        """Create a message displaying the requested width and the limit."""
        error = 'Dense limit exceeded. Requested qubits: {}; active limit: {}'.format(
            n_qubits, limit)
        self.n_qubits = n_qubits
        self.limit = limit
        super(QpeDenseLimitError, self).__init__(error, subject=subject)


class QpeInputError(QpeError):
    """Class for unreadable or malformed input files."""

    def __init__(self, path, reason):
        """Name the path in the message so command-line users can find it."""
        self.path = path
        super(QpeInputError, self).__init__(
            'Cannot read {}: {}'.format(path, reason), subject=path)
