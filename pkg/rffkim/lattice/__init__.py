"""格点图、边界条件与对偶"""

from .graph import LatticeGraph, build_box, build_annulus, build_rectangle, build_masked, from_vertices
from .boundary import BoundaryCondition, BoundaryKind
from .dual import DualEdge, Rectangle, dual_edge, dual_of_primal, primal_of_dual

__all__ = [
    "LatticeGraph",
    "build_box",
    "build_annulus",
    "build_rectangle",
    "build_masked",
    "from_vertices",
    "BoundaryCondition",
    "BoundaryKind",
    "DualEdge",
    "Rectangle",
    "dual_edge",
    "dual_of_primal",
    "primal_of_dual",
]
