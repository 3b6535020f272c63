"""Ontological (hidden-variable) models of quantum mechanics and Monte Carlo
checks that they reproduce quantum statistics."""

from .bell_model import BellModel, BellOnticState, MeasurementContext
from .hilbert import HermitianOp, QuantumState, UnitaryOp
from .model import OntologicalModel
from .phase_space import GaussianStateParams, PhasePoint, QuadraticHamiltonian, WignerGaussianModel
from .qubit_model import QubitModel

__version__ = "0.1.0"

__all__ = [
    "BellModel",
    "BellOnticState",
    "GaussianStateParams",
    "HermitianOp",
    "MeasurementContext",
    "OntologicalModel",
    "PhasePoint",
    "QuadraticHamiltonian",
    "QuantumState",
    "QubitModel",
    "UnitaryOp",
    "WignerGaussianModel",
]
