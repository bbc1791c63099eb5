"""Immutable domain models."""

from .clifford import CliffordElem
from .jets import JetTower, QuadricSystem, RefinedCubic
from .matspace import MatrixSpace
from .variety import CompAlgebra, ParamVariety

__all__ = [
    "CliffordElem",
    "CompAlgebra",
    "JetTower",
    "MatrixSpace",
    "ParamVariety",
    "QuadricSystem",
    "RefinedCubic",
]
