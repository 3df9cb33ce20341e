"""Exact computations with bilinear pairs (algebras given by structure constants)."""

from .exactlin import Field, Matrix, Subspace
from .pair import BilinearPair, parse, serialize

__version__ = "0.1.0"

__all__ = ["Field", "Matrix", "Subspace", "BilinearPair", "parse", "serialize"]
