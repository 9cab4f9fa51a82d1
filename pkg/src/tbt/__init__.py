"""Exact computations with lattices in the Bruhat-Tits building of SL_d over C((z)),
via tropical convexity."""

__version__ = "0.1.0"

from .building import (
    Lattice,
    LatticeClass,
    Membrane,
    adjacent,
    dual,
    intersect,
    lattice_from_point,
    lattice_sum,
    member,
    norm_value,
    psi,
    retract,
)
from .errors import TbtError
from .hull_algorithms import (
    apartment_intersection,
    energy_matrix,
    max_convex_hull,
    membrane_intersection,
    min_convex_hull,
    retract_min_hull,
    standard_lattice_in_apartment,
)
from .matrix_io import load_matrices, parse_matrices
from .scalar_field import KMatrix, RationalFunctionScalar, parse_scalar, smith_over_dvr
from .tropical_polytope import TropPolytope, lattice_points, nearest_point, standard_triangulation
from .valuated_matroid import ValuatedMatroid, blue_rule, from_matrix, red_rule

__all__ = [
    "KMatrix",
    "Lattice",
    "LatticeClass",
    "Membrane",
    "RationalFunctionScalar",
    "TbtError",
    "TropPolytope",
    "ValuatedMatroid",
    "adjacent",
    "apartment_intersection",
    "blue_rule",
    "dual",
    "energy_matrix",
    "from_matrix",
    "intersect",
    "lattice_from_point",
    "lattice_points",
    "lattice_sum",
    "load_matrices",
    "max_convex_hull",
    "member",
    "membrane_intersection",
    "min_convex_hull",
    "nearest_point",
    "parse_matrices",
    "norm_value",
    "parse_scalar",
    "psi",
    "red_rule",
    "retract",
    "retract_min_hull",
    "smith_over_dvr",
    "standard_lattice_in_apartment",
    "standard_triangulation",
]
