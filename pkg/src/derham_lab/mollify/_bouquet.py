from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from derham_lab._errors import BouquetError, ComplexError
from derham_lab.forms._fields import LinearCombinationField
from derham_lab.forms._norms import _check_p, lp_norm
from derham_lab.forms._piecewise import PiecewiseForm
from derham_lab.mollify._charts import DEFAULT_RADIUS, BouquetChart, LineChart
from derham_lab.mollify._global import StarHomotopy, StarRegularization, fit_star_kernel
from derham_lab.mollify._kernel import KernelProfile

if TYPE_CHECKING:
    from derham_lab._complex import SimplicialComplex
    from derham_lab.forms._fields import ComplexField
    from derham_lab.mollify._charts import StarChart

logger = logging.getLogger(__name__)


@dataclass
class BouquetRegularization:
    """Output of :func:`bouquet_star_regularize`.

    Attributes:
        chart (StarChart): the line chart (degree 2) or bouquet chart
        regularized (ComplexField): ``phi^-1 rho^-1 R_eps rho phi`` of the form
        homotopy (ComplexField | None): the same conjugation of ``A_eps``
        homotopy_of_derivative (ComplexField | None): ``A_eps`` applied to
            ``d`` of the extended form, restricted back
        eps (float): final kernel width
        residual (float): L_p norm of ``R w - w - d A w - A d w`` on the star
    """

    chart: StarChart
    regularized: ComplexField
    homotopy: ComplexField | None
    homotopy_of_derivative: ComplexField | None
    eps: float
    p: float
    residual: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "vertex": self.chart.vertex,
            "chart": type(self.chart).__name__,
            "eps": self.eps,
            "p": self.p,
            "residual": self.residual,
        }


def bouquet_star_regularize(
    complex: SimplicialComplex,
    vertex: int,
    omega: PiecewiseForm,
    eps: Any = 0.1,
    profile: KernelProfile | str = KernelProfile.POLYNOMIAL,
    radius: float = DEFAULT_RADIUS,
    kernel_degree: int = 10,
    p: float = 2.0,
    quad_degree: int = 20,
) -> BouquetRegularization:
    """Regularize a form around a vertex of a graph whose star is a 1-bouquet.

    A star with 2m edges goes onto m segments through the origin of the
    plane; the form is extended off the segments sector by sector, the
    local operators act in the plane and the result is restricted back. A
    degree-2 vertex uses its line chart, where this is the plain local
    operator. The extension does not commute with ``d``, so the reported
    homotopy of the derivative is ``A_eps`` of ``d`` of the extension.

    Raises:
        BouquetError: if the star is not a 1-bouquet
        ComplexError: if the form does not live on the complex
    """
    p = _check_p(p)
    if omega.complex != complex:
        raise ComplexError("The form does not live on this complex")
    if complex.dim != 1:
        raise BouquetError(f"1-bouquet stars live in graphs, got a {complex.dim}-complex")
    degree = complex.vertex_degree(vertex)
    if degree == 2:
        chart: StarChart = LineChart(complex, vertex, radius)
    else:
        chart = BouquetChart(complex, vertex, radius)
    kernel, _ = fit_star_kernel(chart, eps, profile, kernel_degree)
    logger.info(f"Bouquet star {vertex}: {type(chart).__name__}, eps={kernel.eps}")

    pushed = chart.push(omega)
    regularized = StarRegularization(omega, chart, kernel, kernel_degree, pushed=pushed)
    homotopy = None
    if omega.degree > 0:
        homotopy = StarHomotopy(omega, chart, kernel, kernel_degree, pushed=pushed)
    derivative = None
    if pushed.degree < pushed.dim:
        derivative = StarHomotopy(
            omega.exterior_d(), chart, kernel, kernel_degree, pushed=pushed.exterior_d()
        )
    terms: list[tuple[float, ComplexField]] = [(1.0, regularized), (-1.0, omega)]
    if homotopy is not None:
        terms.append((-1.0, homotopy.exterior_d()))
    if derivative is not None:
        terms.append((-1.0, derivative))
    star, _ = complex.star(vertex)
    residual = lp_norm(_OnStar(LinearCombinationField(terms), star), p, quad_degree)
    return BouquetRegularization(
        chart=chart,
        regularized=regularized,
        homotopy=homotopy,
        homotopy_of_derivative=derivative,
        eps=float(kernel.eps),
        p=p,
        residual=residual,
    )


class _OnStar(LinearCombinationField):
    """A field on the complex, integrated over the facets of a star only."""

    def __init__(self, field: LinearCombinationField, star: SimplicialComplex):
        super().__init__(field.terms)
        self.star = star

    def quadrature(self, degree=None):
        facets = set(self.star.facets)
        for facet, points, weights in super().quadrature(degree):
            if facet in facets:
                yield facet, points, weights
