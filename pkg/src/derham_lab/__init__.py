"""Lipschitz de Rham calculus on metric simplicial complexes."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("derham-lab")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "uninstalled"

from ._complex import (
    GeometryReport,
    SimplicialComplex,
    boundary_of_simplex,
    build_complex,
    check_geometry,
    edge_path_upper_bound,
    pl_path_length,
)
from ._run_checks import run_checks

__all__ = [
    "GeometryReport",
    "SimplicialComplex",
    "boundary_of_simplex",
    "build_complex",
    "check_geometry",
    "edge_path_upper_bound",
    "pl_path_length",
    "run_checks",
]
