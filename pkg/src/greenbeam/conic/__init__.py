"""Conic optimization: program container and interior-point solver."""

from .program import ConicProgram, LinExpr, herm_parts
from .solver import ConicSolution, solve

__all__ = ["ConicProgram", "LinExpr", "herm_parts", "ConicSolution", "solve"]
