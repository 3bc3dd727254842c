"""Exact lattice, elliptic fibration and weight computations for a family of K3 surfaces."""

from .exactmath import UPoly, MPoly, resultant, discriminant, squarefree_decomposition, smith_normal_form, hermite_normal_form
from .lattice import Lattice, make_named, direct_sum, signature, is_even, disc_group, genus_invariants
from .isometry import find_isometry, NotIsometric

__version__ = "0.1.0"

__all__ = [
    "Lattice",
    "MPoly",
    "NotIsometric",
    "UPoly",
    "direct_sum",
    "disc_group",
    "discriminant",
    "find_isometry",
    "genus_invariants",
    "hermite_normal_form",
    "is_even",
    "make_named",
    "resultant",
    "signature",
    "smith_normal_form",
    "squarefree_decomposition",
]
