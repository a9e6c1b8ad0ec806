"""
SimulationContext facilitates the creation of thread-local overrides to numerical settings.

Within a `with` block of a simulation context, the provided function will be used to
post-process the default settings every time a kernel asks for them.

SimulationContexts use an ordered dict so that they are applied in the order that they
are assigned.
"""
import collections
import functools
import threading


thread_context = threading.local()

SIMULATION_CONTEXT_KEY = 'qpesampling_simulation_context'

DEFAULT_SETTINGS = {
    'dense_limit': 14,
    'prune_tolerance': 1e-12,
    'noise': None,
}


def get_settings_processors():
    """Get the thread-local settings processors."""
    processors = getattr(thread_context, SIMULATION_CONTEXT_KEY, None)
    if processors is None:
        processors = collections.OrderedDict()
        setattr(thread_context, SIMULATION_CONTEXT_KEY, processors)
    return processors


class SimulationContext(object):
    """SimulationContext assigns a settings processor for all kernels executed in a thread."""

    def __init__(self, context_key, context_func):
        """Assign the params to the instance, but don't bind them to the local thread yet."""
        self.context_key = context_key
        self.context_func = context_func

    def __enter__(self):
        """
        When we've entered the with block, we assign to the local thread.

        It will fail upon duplicate context keys.
        """
        processors = get_settings_processors()
        if self.context_key in processors:
            raise ValueError(
                'Duplicate context key: {c.context_key}'.format(c=self))

        processors[self.context_key] = self.context_func
        return self

    def __exit__(self, *args):
        """Clean up by removing the context key from the local thread."""
        get_settings_processors().pop(self.context_key)


def process_settings(settings=None):
    """Apply the processors to a copy of the settings and return the result."""
    processors = get_settings_processors().values()
    processor = functools.reduce(lambda f, g: lambda v: g(f(v)), processors, lambda x: x)
    return processor(dict(DEFAULT_SETTINGS if settings is None else settings))


def get_setting(name):
    """Return a single processed setting."""
    return process_settings()[name]


def dense_limit_context(limit):
    """Convenience function for creating a context that changes the dense qubit limit."""
    return SimulationContext('dense_limit', lambda settings: dict(settings, dense_limit=limit))


def tolerance_context(tolerance):
    """Convenience function for creating a context that changes coefficient pruning."""
    return SimulationContext(
        'prune_tolerance', lambda settings: dict(settings, prune_tolerance=tolerance))


def noise_context(noise):
    """Convenience function for creating a context that supplies a default noise model."""
    return SimulationContext('noise', lambda settings: dict(settings, noise=noise))
