"""Workbench for matching width and read-once branching program lower bounds."""

from .graphs import CnfFormula, Graph, LiteralSet, phi
from .mw import exact_mw, permutation_width
from .bp import Nrobp, build_frontier_obdd

__all__ = ["CnfFormula", "Graph", "LiteralSet", "Nrobp", "build_frontier_obdd", "exact_mw", "permutation_width", "phi"]
__version__ = "0.1.0"
