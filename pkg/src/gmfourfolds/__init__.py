"""Exact-arithmetic workbench for special Gushel-Mukai fourfolds.

Everything is computed over a prime field (default modulus 65521) with a
sparse Groebner kernel, graded-module sheaf cohomology, and a construction
pipeline for the 21 families of special surfaces in a del Pezzo fivefold.
"""

from .ring import PrimeField, PolyRing, Polynomial
from .ideals import Ideal
from .budget import Budget, BudgetExceededError

__all__ = [
    "PrimeField",
    "PolyRing",
    "Polynomial",
    "Ideal",
    "Budget",
    "BudgetExceededError",
]

__version__ = "0.1.0"
