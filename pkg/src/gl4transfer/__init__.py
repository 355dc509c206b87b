"""Orbital integrals, Bruhat-Tits tree multiplicities and intersection
numbers for inner forms of GL_4 over F_q((pi)), checked exactly against
brute-force lattice enumeration."""

from .laurent import LaurentPoly
from .localfield import NumInvariant, element_from_invariant, matching_exists

__all__ = ["LaurentPoly", "NumInvariant", "element_from_invariant", "matching_exists"]
__version__ = "0.1.0"
