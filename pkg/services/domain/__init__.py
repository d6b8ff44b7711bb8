"""Domain layer exports."""

from .lagrangian import LagrangianTriple
from .measured_space import CenteredWaveFunction, MeasuredSpace, WaveFunction
from .point_config import PointConfig
from .qubits import EmbeddedTriple, LambdaTensor, Morphism2, RhoKernel, ThetaBlocks, Triple

__all__ = [
    "CenteredWaveFunction",
    "EmbeddedTriple",
    "LagrangianTriple",
    "LambdaTensor",
    "MeasuredSpace",
    "Morphism2",
    "PointConfig",
    "RhoKernel",
    "ThetaBlocks",
    "Triple",
    "WaveFunction",
]
