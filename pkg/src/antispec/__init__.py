"""Spectra of non-hermitean matrices with an anti-unitary symmetry.

Classifies eigenvalues and eigenvectors of ``H`` with ``A H A^-1 = H``,
``A = U K`` anti-unitary, into the representation types of ``A``.
"""

from .antiunitary import AntiUnitaryOp, apply, check_commutation, conjugate_basis, real_form, square
from .classifier import (
    ClassificationReport,
    Multiplicities,
    RepBlock,
    RepKind,
    classify,
    flip_value,
    gauge_fix,
    representation_string,
)
from .errors import *  # noqa: F401,F403
from .linalg import BiorthogonalSystem, biorthogonalize, eig_general, random_unitary

__version__ = "0.1.0"

__all__ = [
    "AntiUnitaryOp",
    "apply",
    "square",
    "check_commutation",
    "conjugate_basis",
    "real_form",
    "ClassificationReport",
    "Multiplicities",
    "RepBlock",
    "RepKind",
    "classify",
    "flip_value",
    "gauge_fix",
    "representation_string",
    "BiorthogonalSystem",
    "biorthogonalize",
    "eig_general",
    "random_unitary",
]
