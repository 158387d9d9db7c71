"""Polynomial differential forms, piecewise forms on complexes, quadrature and norms."""

from ._fields import ComplexField, LinearCombinationField
from ._norms import lp_norm, patch_lp_norm, patch_sobolev_norm, pointwise_norm, sobolev_norm
from ._patch import PatchField, PolyPatchField, as_patch_field, patch_derivative
from ._piecewise import (
    PiecewiseForm,
    barycentric_coordinates,
    barycentric_form,
    face_embedding,
    face_embedding_arrays,
    field_trace,
    restrict_to_face,
    to_barycentric,
)
from ._poly import (
    AffineMap,
    PolyForm,
    VectorFieldPoly,
    basis_indices,
    compound_matrix,
    coordinates,
    exterior_d,
    exterior_d_arrays,
    integrate_parameter,
    interior_arrays,
    interior_product,
    lie_derivative,
    pull_coefficients,
    pullback,
    wedge,
    wedge_arrays,
)
from ._quadrature import (
    ball_rule,
    box_rule,
    exact_measure_factor,
    gauss_legendre,
    measure_factor,
    reference_integral,
    simplex_volume,
    stroud_rule,
    tensor_rule,
)

__all__ = [
    "AffineMap",
    "ComplexField",
    "LinearCombinationField",
    "PatchField",
    "PiecewiseForm",
    "PolyForm",
    "PolyPatchField",
    "VectorFieldPoly",
    "as_patch_field",
    "ball_rule",
    "barycentric_coordinates",
    "barycentric_form",
    "basis_indices",
    "box_rule",
    "compound_matrix",
    "coordinates",
    "exact_measure_factor",
    "exterior_d",
    "exterior_d_arrays",
    "face_embedding",
    "face_embedding_arrays",
    "field_trace",
    "gauss_legendre",
    "integrate_parameter",
    "interior_arrays",
    "interior_product",
    "lie_derivative",
    "lp_norm",
    "measure_factor",
    "patch_derivative",
    "patch_lp_norm",
    "patch_sobolev_norm",
    "pointwise_norm",
    "pull_coefficients",
    "pullback",
    "reference_integral",
    "restrict_to_face",
    "simplex_volume",
    "sobolev_norm",
    "stroud_rule",
    "tensor_rule",
    "to_barycentric",
    "wedge",
    "wedge_arrays",
]

