"""Exact computations in the universal graded-Tannakian category of a Kunneth functor."""
from .linalg import BACKEND

__all__ = ["BACKEND"]

__version__ = "0.1.0"
