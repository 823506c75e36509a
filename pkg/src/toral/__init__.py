"""Exact invariants for integer matrices acting on tori.

Bowen-Franks groups and their module structure, ideal classes in ``Z[beta]``
for the irreducible case, and finite truncations of the profinite towers.
"""

__version__ = "0.1.0"

from .bf_invariants import (
    BFGroup,
    bf_group,
    bf_k,
    enumerate_periodic_points,
    group_isomorphic,
    module_isomorphic,
    per_count,
    strong_bf_equivalent,
)
from .errors import PreconditionError, ToralError
from .exact_linalg import IntMatrix, Lattice, charpoly, det, hnf, snf
from .ideals import (
    FractionalIdeal,
    conjugate_over_Z,
    equivalence_chain_report,
    ideal_from_matrix,
    weakly_equivalent,
)
from .poly import Poly, parse_poly
from .polynum import is_hyperbolic, is_irreducible, similar_over_Q
from .profinite_tower import DivisorChain, build_tower, order_mod

__all__ = [
    "BFGroup",
    "DivisorChain",
    "FractionalIdeal",
    "IntMatrix",
    "Lattice",
    "Poly",
    "PreconditionError",
    "ToralError",
    "bf_group",
    "bf_k",
    "build_tower",
    "charpoly",
    "conjugate_over_Z",
    "det",
    "enumerate_periodic_points",
    "equivalence_chain_report",
    "group_isomorphic",
    "hnf",
    "ideal_from_matrix",
    "is_hyperbolic",
    "is_irreducible",
    "module_isomorphic",
    "order_mod",
    "parse_poly",
    "per_count",
    "similar_over_Q",
    "snf",
    "strong_bf_equivalent",
    "weakly_equivalent",
]
