"""Exact Chow-ring and Poincaré-series computations for moduli of plane quartics."""

from .poly import GradedPoly, VarTable
from .series import RatSeries

__all__ = ["GradedPoly", "VarTable", "RatSeries"]
__version__ = "0.1.0"
