"""Extensions of forms from boundaries, skeleta, bouquets and spheres, with norm reports."""

from ._boundary import (
    BoundaryExtension,
    collar_lipschitz,
    extend_from_boundary,
    extension_norm_report,
)
from ._bouquet import Bouquet, BouquetExtension, bouquet_norm_report, extend_bouquet
from ._cylinder import cylinder_end, cylinder_norm_report, cylinder_projection, extend_cylinder
from ._skeleton import SkeletonExtension, extend_from_skeleton
from ._sphere import CircleField, extend_by_zero_sphere, sphere_extension_report

__all__ = [
    "BoundaryExtension",
    "Bouquet",
    "BouquetExtension",
    "CircleField",
    "SkeletonExtension",
    "bouquet_norm_report",
    "collar_lipschitz",
    "cylinder_end",
    "cylinder_norm_report",
    "cylinder_projection",
    "extend_bouquet",
    "extend_by_zero_sphere",
    "extend_cylinder",
    "extend_from_boundary",
    "extend_from_skeleton",
    "extension_norm_report",
    "sphere_extension_report",
]
