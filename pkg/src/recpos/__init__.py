"""recpos: positivity certificates for P-finite sequences of Poincare type.

The pipeline converts a linear recurrence with polynomial coefficients into
its companion operator, orders the eigenvalue branches by asymptotic modulus
via composed products and Puiseux expansions, builds a sequence of positive
proper cones from the truncated branches, and certifies the inclusion chain
A(n) K_n inside K_{n+1} exactly.  Positivity then follows by induction from
one certified cone membership plus an exact check of the initial terms.
"""

from .algebraic import AlgebraicNumber, ComplexInterval, compare_modulus, make_algebraic, sign
from .certify import PositivityCertificate, Verdict, decide_positivity, verify_certificate
from .config import Options
from .cones import (
    ConeBasis,
    build_basis,
    choose_epsilon,
    contraction_margin,
    inclusion_index,
    membership,
    positivity_index,
)
from .polys import (
    BiPoly,
    RationalFunction,
    UniPoly,
    composed_product_pairs,
    composed_product_subsets,
    reversed_char_poly,
    squarefree_decomposition,
)
from .puiseux import (
    BranchSet,
    PuiseuxBranch,
    branch_step_order,
    evaluate_branch,
    extend_branch,
    puiseux_expand,
)
from .recurrence import InvalidRecurrence, Recurrence, companion, limit_matrix, unroll
from .spectral import (
    ModulusGrouping,
    SpectralReport,
    check_contraction,
    check_theorem_conditions,
    modulus_groups,
    order_branches,
)
from .tails import TailCertificate, certify_kpoly_positive

__all__ = [
    "AlgebraicNumber",
    "BiPoly",
    "BranchSet",
    "ComplexInterval",
    "ConeBasis",
    "InvalidRecurrence",
    "ModulusGrouping",
    "Options",
    "PositivityCertificate",
    "PuiseuxBranch",
    "RationalFunction",
    "Recurrence",
    "SpectralReport",
    "TailCertificate",
    "UniPoly",
    "Verdict",
    "branch_step_order",
    "build_basis",
    "check_contraction",
    "check_theorem_conditions",
    "choose_epsilon",
    "companion",
    "compare_modulus",
    "composed_product_pairs",
    "composed_product_subsets",
    "contraction_margin",
    "decide_positivity",
    "evaluate_branch",
    "extend_branch",
    "inclusion_index",
    "limit_matrix",
    "make_algebraic",
    "membership",
    "modulus_groups",
    "order_branches",
    "positivity_index",
    "puiseux_expand",
    "reversed_char_poly",
    "sign",
    "squarefree_decomposition",
    "unroll",
    "verify_certificate",
]

__version__ = "0.1.0"
