"""Entanglement between two blocks of the spin-S valence bond solid chain."""

from .numbers import HalfInt, SignedSqrtRational
from .su2 import clebsch_gordan, f_matrix, six_j
from .vbs import Boundary, ChainSpec, eta, lambda_spectrum

__version__ = "0.1.0"

__all__ = [
    "HalfInt",
    "SignedSqrtRational",
    "clebsch_gordan",
    "six_j",
    "f_matrix",
    "Boundary",
    "ChainSpec",
    "eta",
    "lambda_spectrum",
    "__version__",
]
