"""Solitary waves of the multicomponent long-wave/short-wave interaction system."""

__version__ = "0.1.0"

from .errors import ParameterError, SolverError, StepError  # noqa: E402
from .grid import SpectralGrid  # noqa: E402
from .model import ModelParams, ProfileSet, SolveReport  # noqa: E402

__all__ = ["ParameterError", "SolverError", "StepError", "SpectralGrid", "ModelParams",
           "ProfileSet", "SolveReport", "__version__"]
