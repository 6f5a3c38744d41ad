"""Exact computations with coordinates of R[x,y] for R = Z or Q[z]."""

from .base_rings import QZ, QZF, ZZ, RatFunc, UniPoly
from .bipoly import BiPoly
from .classify import Quadruplet, classify, expand, reduce
from .construct import Rl2Data, construct_rl2, construct_rs, example2_family, verify_rl2_criterion
from .cotame import certify_cotame_r1, certify_cotame_r2, verify_certificate
from .equivalence import check_witness, decide_same_p, poloni_decide
from .parsing import parse_poly
from .plane_maps import PlaneMap, compose, decompose_over_field, recompose, vde_check
from .va1 import composition_inverse_mod, is_va1_mod

__version__ = "0.1.0"

__all__ = [
    "QZ", "QZF", "ZZ", "RatFunc", "UniPoly", "BiPoly", "Quadruplet", "classify", "expand",
    "reduce", "Rl2Data", "construct_rl2", "construct_rs", "example2_family",
    "verify_rl2_criterion", "certify_cotame_r1", "certify_cotame_r2", "verify_certificate",
    "check_witness", "decide_same_p", "poloni_decide", "parse_poly", "PlaneMap", "compose",
    "decompose_over_field", "recompose", "vde_check", "composition_inverse_mod", "is_va1_mod",
]
