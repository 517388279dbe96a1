"""formiso: average-case isomorphism testing for polynomials, trilinear
forms, and algebras over small finite fields, plus the gadget reduction
from alternating matrix-tuple pseudo-isometry to alternating trilinear
form equivalence."""

from .gfq import FieldCtx, field_new, field_from_order

__all__ = ["FieldCtx", "field_new", "field_from_order"]
__version__ = "0.1.0"
