"""Angular-channel Schmidt analysis of two Coulomb-interacting particles in a 2D harmonic trap."""

from .errors import TrapEntError
from .measures import EntanglementReport
from .pipeline import AnalysisConfig, analyze
from .radial_solver import solve_ground_radial
from .wigner_limit import asymptotic_spectrum

__all__ = [
    "AnalysisConfig",
    "EntanglementReport",
    "TrapEntError",
    "analyze",
    "asymptotic_spectrum",
    "solve_ground_radial",
]
