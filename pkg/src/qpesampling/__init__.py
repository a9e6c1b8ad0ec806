"""Statevector QPE sampling of absorption spectra with Iceberg error detection."""

from . import checks
from . import circuits
from . import config
from . import context
from . import dipoles
from . import encoding
from . import errors
from . import evolution
from . import fermions
from . import fileio
from . import gates
from . import iceberg
from . import lowering
from . import paulis
from . import qpe
from . import simulator
from . import spectra
from . import tapering

__all__ = [
    "checks", "circuits", "config", "context", "dipoles", "encoding", "errors",
    "evolution", "fermions", "fileio", "gates", "iceberg", "lowering", "paulis",
    "qpe", "simulator", "spectra", "tapering"
]

try:
    import pandas as pd
except ImportError:
    pass
else:
    from . import cli
    from . import results
    __all__ = __all__ + ["cli", "results"]
