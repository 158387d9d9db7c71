"""Cochains, the Whitney map and the de Rham integration map."""

from ._cochain import Cochain, coboundary, coboundary_matrix
from ._derham import (
    derham_map,
    derham_map_bound,
    projector_defect,
    reference_derham_map,
    whitney_norm_bound,
    whitney_projector,
)
from ._whitney import (
    whitney,
    whitney_basis_piece,
    whitney_is_chain_map_check,
    whitney_normalized,
)

__all__ = [
    "Cochain",
    "coboundary",
    "coboundary_matrix",
    "derham_map",
    "derham_map_bound",
    "projector_defect",
    "reference_derham_map",
    "whitney",
    "whitney_basis_piece",
    "whitney_is_chain_map_check",
    "whitney_norm_bound",
    "whitney_normalized",
    "whitney_projector",
]
