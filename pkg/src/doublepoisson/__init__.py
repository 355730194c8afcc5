"""Double Poisson structures on finite dimensional semi-simple algebras."""

from .algebra import BratteliDiagram, MatrixUnit, SemiSimpleAlgebra
from .exactmath import ExactMatrix, Poly
from .necklace import GradedElement, Necklace, necklace_bracket
from .quiver import Arrow, Quiver, build_quiver, build_relative_quiver
from .tensors import DoubleTensor, check_tensor, moment_map

__all__ = [
    "Arrow",
    "BratteliDiagram",
    "DoubleTensor",
    "ExactMatrix",
    "GradedElement",
    "MatrixUnit",
    "Necklace",
    "Poly",
    "Quiver",
    "SemiSimpleAlgebra",
    "build_quiver",
    "build_relative_quiver",
    "check_tensor",
    "moment_map",
    "necklace_bracket",
]
