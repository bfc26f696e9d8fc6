"""Classification and invariants of Butson-type complex Hadamard matrices."""

__version__ = "0.1.0"

from .algebra import ButsonMatrix, MonomialPair, apply, dephase, determinant, inner_product, is_hadamard
from .equivalence import act_class, are_equivalent, automorphism_order, build_graph, canonical_form
from .families import AffineFamily, Monomial, evaluate, load_bundled, members, verify_family
from .invariants import defect, defect_basis, profile, vanishing_minors, zq_rank
from .search import classify, double_count_check

__all__ = [
    "ButsonMatrix", "MonomialPair", "apply", "dephase", "determinant", "inner_product", "is_hadamard",
    "act_class", "are_equivalent", "automorphism_order", "build_graph", "canonical_form",
    "AffineFamily", "Monomial", "evaluate", "load_bundled", "members", "verify_family",
    "defect", "defect_basis", "profile", "vanishing_minors", "zq_rank",
    "classify", "double_count_check",
]
