"""Hard homogeneous spaces: generic protocols, algebraic tori, p-adic
discrete-logarithm attacks and the class-group action on elliptic curves."""

from .arith import ArithmeticDomainError, ModInt, factorize, mod_pow
from .fields import ExtField, ExtFieldElement
from .hhs import HhsInstance, affine_hhs, bsgs_dlog, dl_hhs, pohlig_hellman
from .padic import PadicNumber, padic_exp, padic_log

__version__ = "0.1.0"

__all__ = [
    "ArithmeticDomainError", "ExtField", "ExtFieldElement", "HhsInstance", "ModInt",
    "PadicNumber", "affine_hhs", "bsgs_dlog", "dl_hhs", "factorize", "mod_pow",
    "padic_exp", "padic_log", "pohlig_hellman",
]
