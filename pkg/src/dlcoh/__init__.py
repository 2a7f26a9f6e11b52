"""Exact computations with Coxeter groups, braid monoids, Hecke algebras and
graded Deligne-Lusztig characters of rank-2 groups."""

from .errors import DLCohError

__version__ = "0.1.0"
__all__ = ["DLCohError", "__version__"]
