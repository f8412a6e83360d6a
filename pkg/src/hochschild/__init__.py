"""Exact computation of classical and secondary Hochschild homology.

Finite-dimensional algebras are given by structure constants over the
rationals or a prime field; the package builds the classical complex
C(A, M) and the secondary complex of a triple (A, B, eps) with
B-symmetric coefficients, computes homology exactly, and verifies the
structural theorems (Morita invariance of triples with explicit chain
homotopies, the low-degree five-term exact sequence, the identification
of H_1 with Kaehler differentials, functoriality) on concrete instances.
"""

from .fields import GF, QQ
from .algebra import (
    AlgebraMorphism,
    Bimodule,
    BimoduleMorphism,
    FiniteAlgebra,
    Triple,
)

__all__ = [
    "GF",
    "QQ",
    "AlgebraMorphism",
    "Bimodule",
    "BimoduleMorphism",
    "FiniteAlgebra",
    "Triple",
]

__version__ = "0.1.0"
