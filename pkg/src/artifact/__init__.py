"""Exact-arithmetic checks for L-infinity and A-infinity structures, Hochschild
cochains, telescope complexes, closed-open maps and stable-tree combinatorics."""

from .errors import (
    ArtifactError,
    DgLaAxiomError,
    GradingError,
    NotAComplexError,
    ParseError,
    RingError,
    StructureError,
    WindowError,
)
from .grading import GradedModule, Generator, GradingDatum, koszul_sign, reorder_sign, unshuffles
from .kernels import BACKEND
from .linalg import BoundedComplex, SparseIntMatrix, homology, smith_normal_form
from .rings import QQ, ZZ, IntegersMod

__version__ = "0.1.0"

__all__ = [
    "ArtifactError", "DgLaAxiomError", "GradingError", "NotAComplexError", "ParseError", "RingError",
    "StructureError", "WindowError", "GradedModule", "Generator", "GradingDatum", "koszul_sign",
    "reorder_sign", "unshuffles", "BACKEND", "BoundedComplex", "SparseIntMatrix", "homology",
    "smith_normal_form", "QQ", "ZZ", "IntegersMod",
]
