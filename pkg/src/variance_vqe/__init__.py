"""Variance-minimisation VQE for small Lipkin-Meshkov-Glick Hamiltonians."""

from .encoding import PaddingPolicy, decompose, spectrum
from .engine import (
    EstimatorConfig,
    SpectrumReport,
    VqeResult,
    energy_cost,
    find_spectrum,
    minimize,
    sweep,
    variance_cost,
)
from .estimator import VarianceVQE
from .lmg import LmgParams, build_fock_sector, build_quasispin
from .mitigation import ReadoutNoiseModel, calibration_matrix, corrupt, mitigate
from .pauli import PauliSum, multiply_strings
from .simulator import ShotHistogram, build_ansatz, expectation, measure_pauli, run

__version__ = "0.1.0"

__all__ = [
    "EstimatorConfig",
    "LmgParams",
    "PaddingPolicy",
    "PauliSum",
    "ReadoutNoiseModel",
    "ShotHistogram",
    "SpectrumReport",
    "VarianceVQE",
    "VqeResult",
    "build_ansatz",
    "build_fock_sector",
    "build_quasispin",
    "calibration_matrix",
    "corrupt",
    "decompose",
    "energy_cost",
    "expectation",
    "find_spectrum",
    "measure_pauli",
    "minimize",
    "mitigate",
    "multiply_strings",
    "run",
    "spectrum",
    "sweep",
    "variance_cost",
]
