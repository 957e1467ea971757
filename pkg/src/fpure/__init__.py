"""Enumerate the ideals of F_q[x_1..x_d] fixed by a Cartier map u * Phi_e."""

from .ffield import FieldElement, FieldSpec, parse_field
from .polyring import GREVLEX, LEX, MonomialOrder, Polynomial, PolynomialRing, block_order
from .ideals import (
    Ideal,
    bracket_power,
    colon,
    intersect,
    maximal_ideal,
    minimal_generators,
    truncate,
)
from .cartier import (
    CartierMap,
    InvariantViolation,
    apply_phi,
    eth_root,
    eth_root_poly,
    hash_op,
    is_compatible,
    is_fixed,
)

__version__ = "0.1.0"
