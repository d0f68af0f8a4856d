"""Finite-dimensional Fell bundles over discrete (double) groupoids.

Executable linear algebra for bundle convolution algebras: linking
matrices, the double *-algebra over grid double groupoids with folding,
GNS representations from a state, and the transpose dual.  Every
structural axiom comes with a machine-checkable verifier.
"""

from .cxmat import adjoint, conjugate, gram_quotient, is_psd, op_norm, transpose
from .groupoid import DoubleGroupoid, Groupoid, grid_double_groupoid, pair_groupoid
from .fellcore import (
    FellBundle,
    Section,
    check_cstar_category,
    check_fell_axioms,
    check_projection_functor,
    is_saturated,
    linking,
)
from .dfell import (
    DoubleBundle,
    GradedElement,
    SquareSection,
    build_example1,
    check_double_star_axioms,
    compose4,
    hcompose,
    union,
    vcompose,
)
from .gns import GnsRep, State, gns_homset, gns_intertwiner, gns_object, gns_twocell
from .dualcat import DualDescriptor, conj_J, dual_category, dual_section
from .report import Report

__all__ = [
    "adjoint",
    "transpose",
    "conjugate",
    "op_norm",
    "is_psd",
    "gram_quotient",
    "Groupoid",
    "DoubleGroupoid",
    "pair_groupoid",
    "grid_double_groupoid",
    "FellBundle",
    "Section",
    "linking",
    "check_fell_axioms",
    "check_cstar_category",
    "check_projection_functor",
    "is_saturated",
    "DoubleBundle",
    "SquareSection",
    "GradedElement",
    "hcompose",
    "vcompose",
    "compose4",
    "union",
    "check_double_star_axioms",
    "build_example1",
    "State",
    "GnsRep",
    "gns_object",
    "gns_homset",
    "gns_twocell",
    "gns_intertwiner",
    "conj_J",
    "dual_section",
    "dual_category",
    "DualDescriptor",
    "Report",
]
