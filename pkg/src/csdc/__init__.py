"""Danger cylinder and its companion surface for perspective-three-point pose."""

from .config import DEFAULT, Tolerances
from .errors import (ConfigInvalid, CrossingAtIntersection, CSDCError, DegenerateTriangle,
                     InsufficientSamples, LeadingCoefficientVanishes, PairNotReal,
                     PathNotTransversal, RankDeficientBasis, SingularEliminationSystem,
                     TangentialContact, UnsupportedFormat, ViewpointOnControlPoint, ZeroHeight)
from .geometry import (AngleTriple, ControlTriangle, Viewpoint, angles_from_viewpoint,
                       centers_from_distances, dc_point, dc_value, distances, equilateral,
                       make_triangle)
from .solver import (Classification, SolutionSet, TripletSolution, count_p3p, count_p3p_batch,
                     solve, solve_batch, solve_viewpoint)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT", "Tolerances",
    "AngleTriple", "ControlTriangle", "Viewpoint", "angles_from_viewpoint",
    "centers_from_distances", "dc_point", "dc_value", "distances", "equilateral", "make_triangle",
    "Classification", "SolutionSet", "TripletSolution", "count_p3p", "count_p3p_batch",
    "solve", "solve_batch", "solve_viewpoint",
    "CSDCError", "ConfigInvalid", "CrossingAtIntersection", "DegenerateTriangle",
    "InsufficientSamples", "LeadingCoefficientVanishes", "PairNotReal", "PathNotTransversal",
    "RankDeficientBasis", "SingularEliminationSystem", "TangentialContact", "UnsupportedFormat",
    "ViewpointOnControlPoint", "ZeroHeight",
]
