from .test_circuits import TestGates, TestCircuit
from .test_config import TestRunConfig
from .test_context import TestContext
from .test_dipoles import TestDipoleMatrix, TestMajoranaForm, TestDipoleInput
from .test_encoding import TestEncoding
from .test_evolution import TestEvolution
from .test_fermions import TestFermions
from .test_fileio import TestFileIO
from .test_iceberg import TestLayout, TestCompilation, TestDiscard
from .test_lowering import TestLowering
from .test_paulis import TestPauliString, TestPauliOperator
from .test_qpe import TestQpeConfig, TestEigenSpectrum, TestAlpha, TestQpeCircuits
from .test_simulator import TestStateVector, TestSimulator
from .test_spectra import (
    TestSpectrumSeries, TestBroadening, TestSpectrumErrors, TestPostProcessing,
    TestStatisticalExperiment)
from .test_tapering import TestTapering
try:
    import pandas as pd
except ImportError:
    pass
else:
    from .test_cli import TestCommandLine
    from .test_results import TestResults
from .test_typeddict import TestTypedDict
