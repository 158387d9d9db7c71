from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

from derham_lab._complex import SimplicialComplex, boundary_of_simplex, simplex_faces
from derham_lab._errors import ComplexError
from derham_lab.extension._boundary import BoundaryExtension, extension_norm_report
from derham_lab.forms._fields import ComplexField
from derham_lab.forms._piecewise import PiecewiseForm, field_trace

if TYPE_CHECKING:
    from collections.abc import Iterator, Mapping

    import numpy as np

    from derham_lab._complex import Simplex

logger = logging.getLogger(__name__)


class _TraceField(ComplexField):
    """Trace of a form on one of its simplices, as a field on that simplex."""

    def __init__(self, source: ComplexField, simplex: Simplex):
        super().__init__(SimplicialComplex([simplex]), source.degree)
        self.source = source
        self.simplex = simplex
        self.default_quadrature_degree = source.default_quadrature_degree

    def evaluate(self, facet, coords):
        return field_trace(self.source, self.simplex, coords)

    def exterior_d(self):
        return _TraceField(self.source.exterior_d(), self.simplex)


class _FaceAssembly(ComplexField):
    """A field on a complex given by one field per maximal simplex."""

    def __init__(self, complex: SimplicialComplex, fields: Mapping[Simplex, ComplexField]):
        degree = next(iter(fields.values())).degree
        super().__init__(complex, degree)
        self.fields = dict(fields)
        self.default_quadrature_degree = max(
            f.default_quadrature_degree for f in self.fields.values()
        )

    def evaluate(self, facet, coords):
        return self.fields[tuple(facet)].evaluate(facet, coords)

    def exterior_d(self):
        return _FaceAssembly(self.complex, {s: f.exterior_d() for s, f in self.fields.items()})

    def quadrature(self, degree=None) -> Iterator[tuple[Simplex, np.ndarray, np.ndarray]]:
        for facet, piece in self.fields.items():
            for _, points, weights in piece.quadrature(degree):
                yield facet, points, weights


class SkeletonExtension(_FaceAssembly):
    """Extension of a form from a skeleton to the whole complex.

    Attributes:
        fields (dict): field on every maximal simplex of the complex
        steps (list[dict]): norm report of every dimension step
    """

    steps: list[dict[str, Any]]

    def __repr__(self) -> str:
        return f"SkeletonExtension(complex={self.complex.name}, degree={self.degree})"


@dataclass
class _StepTotals:
    dimension: int
    lp_in: float = 0.0
    lp_out: float = 0.0
    sobolev_in: float = 0.0
    sobolev_out: float = 0.0
    simplices: list[str] = field(default_factory=list)

    def add(self, report: dict[str, Any], p: float) -> None:
        self.lp_in += report["lp_input"] ** p
        self.lp_out += report["lp_output"] ** p
        self.sobolev_in += report["sobolev_input"] ** p
        self.sobolev_out += report["sobolev_output"] ** p

    def to_dict(self, p: float) -> dict[str, Any]:
        lp_in, lp_out = self.lp_in ** (1 / p), self.lp_out ** (1 / p)
        sob_in, sob_out = self.sobolev_in ** (1 / p), self.sobolev_out ** (1 / p)
        return {
            "dimension": self.dimension,
            "lp_input": lp_in,
            "lp_output": lp_out,
            "sobolev_input": sob_in,
            "sobolev_output": sob_out,
            "lp_holds": bool(lp_out <= lp_in * (1 + 1e-10) + 1e-14),
            "sobolev_holds": bool(sob_out <= sob_in * (1 + 1e-10) + 1e-14),
        }


def extend_from_skeleton(
    omega: PiecewiseForm,
    complex: SimplicialComplex,
    inner_scale: float = 0.5,
    p: float = 2.0,
    report: bool = True,
) -> SkeletonExtension:
    """Extend a form on the m-skeleton of a complex to the whole complex.

    Every simplex of dimension m + 1, m + 2, ... is filled in turn with the
    collar extension of the field already built on its boundary.

    Args:
        omega (PiecewiseForm): face compatible form on ``complex.skeleton(m)``
        complex (SimplicialComplex): the complex to extend to
        inner_scale (float): scale of the inner copies where the result is zero
        p (float): exponent of the per step norm report
        report (bool): compute the per step norm report

    Returns:
        SkeletonExtension: a field on ``complex`` whose trace on the skeleton
            is ``omega``

    Raises:
        ComplexError: if ``omega`` does not live on a skeleton of ``complex``
        TraceMismatchError: if the pieces of ``omega`` disagree on shared faces
    """
    m = omega.complex.dim
    if m > complex.dim or omega.complex != complex.skeleton(m):
        raise ComplexError(f"{omega.complex} is not a skeleton of {complex}")
    omega.check_compatible()

    built: dict[Simplex, ComplexField] = {
        s: _TraceField(omega, s) for j in range(m + 1) for s in complex.simplices[j]
    }
    steps = []
    for j in range(m + 1, complex.dim + 1):
        totals = _StepTotals(j)
        for simplex in complex.simplices[j]:
            boundary = _FaceAssembly(
                boundary_of_simplex(simplex),
                {face: built[face] for face in simplex_faces(simplex, j - 1)},
            )
            built[simplex] = BoundaryExtension(boundary, simplex, inner_scale)
            if report:
                totals.add(extension_norm_report(boundary, built[simplex], p), p)
        if report and not math.isinf(p):
            steps.append(totals.to_dict(p))
            logger.debug(f"Extension step to dimension {j}: {steps[-1]}")

    result = SkeletonExtension(complex, {f: built[f] for f in complex.facets})
    result.steps = steps
    return result
