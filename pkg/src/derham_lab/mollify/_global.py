from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np

from derham_lab._errors import DegreeError, SupportError
from derham_lab.forms._fields import ComplexField, LinearCombinationField
from derham_lab.forms._norms import _check_p, lp_norm, pointwise_norm
from derham_lab.forms._piecewise import PiecewiseForm, to_barycentric
from derham_lab.forms._poly import exterior_d_arrays, pull_coefficients
from derham_lab.forms._quadrature import ball_rule
from derham_lab.mollify._charts import DEFAULT_RADIUS, star_charts
from derham_lab.mollify._diffeo import BallDiffeo
from derham_lab.mollify._kernel import KernelProfile, make_kernel
from derham_lab.mollify._local import LocalHomotopy, LocalRegularization

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

    from derham_lab._complex import Simplex
    from derham_lab.forms._patch import PatchField
    from derham_lab.mollify._charts import StarChart
    from derham_lab.mollify._kernel import KernelSpec

logger = logging.getLogger(__name__)

FD_STEP = 1e-5
MAX_HALVINGS = 20


def _ball_points(chart: StarChart, facet: Simplex, coords: np.ndarray):
    """Chart images of the points and the mask of those inside ``B_1``."""
    mask = chart.contains(facet, coords)
    y = np.zeros((len(coords), chart.ambient_dim))
    if mask.any():
        y[mask] = chart.to_chart(facet, coords[mask])
        mask &= np.sum(y**2, axis=1) < 1.0
    return y, mask


class StarRegularization(ComplexField):
    """``R_i = phi^* R_eps phi_*`` on ``phi^-1(B_1)``; the identity elsewhere.

    Args:
        inner (ComplexField): the form to regularize
        chart (StarChart): chart of the star
        kernel (KernelSpec): kernel on the chart target
        kernel_degree (int): degree of the kernel rule
        pushed (PatchField, optional): the field on the chart target,
            ``chart.push(inner)`` by default
    """

    def __init__(
        self,
        inner: ComplexField,
        chart: StarChart,
        kernel: KernelSpec,
        kernel_degree: int = 10,
        pushed: PatchField | None = None,
    ):
        super().__init__(inner.complex, inner.degree)
        self.inner = inner
        self.chart = chart
        self.kernel = kernel
        self.kernel_degree = kernel_degree
        self.pushed = chart.push(inner) if pushed is None else pushed
        self.local = LocalRegularization(self.pushed, kernel, kernel_degree=kernel_degree)
        self.default_quadrature_degree = inner.default_quadrature_degree

    def __repr__(self) -> str:
        return f"StarRegularization(vertex={self.chart.vertex}, eps={self.kernel.eps})"

    def evaluate(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float).reshape(-1, len(facet) - 1)
        y, inside = _ball_points(self.chart, facet, coords)
        out = np.zeros((len(coords), math.comb(len(facet) - 1, self.degree)))
        if (~inside).any():
            out[~inside] = self.inner.evaluate(facet, coords[~inside])
        if inside.any():
            J = self.chart.forward_jacobian(facet, coords[inside])
            out[inside] = pull_coefficients(J, self.local.evaluate(y[inside]), self.degree)
        return out

    def exterior_d(self) -> ComplexField:
        return StarRegularization(
            self.inner.exterior_d(),
            self.chart,
            self.kernel,
            self.kernel_degree,
            pushed=self.pushed.exterior_d(),
        )


class StarHomotopy(ComplexField):
    """``A_i = phi^* A_eps phi_*`` on ``phi^-1(B_1)``; zero elsewhere.

    The degree is one less than that of ``pushed``. Passing
    ``pushed = chart.push(w).exterior_d()`` gives ``A_i`` applied to ``d w``
    as seen from the chart.

    Raises:
        DegreeError: on 0-forms
    """

    def __init__(
        self,
        inner: ComplexField,
        chart: StarChart,
        kernel: KernelSpec,
        kernel_degree: int = 10,
        pushed: PatchField | None = None,
        time_nodes: int = 6,
    ):
        pushed = chart.push(inner) if pushed is None else pushed
        if pushed.degree == 0:
            raise DegreeError("A_i lowers the degree and is zero on 0-forms")
        super().__init__(inner.complex, pushed.degree - 1)
        self.chart = chart
        self.kernel = kernel
        self.pushed = pushed
        self.local = LocalHomotopy(
            pushed, kernel, kernel_degree=kernel_degree, time_nodes=time_nodes
        )
        self.default_quadrature_degree = inner.default_quadrature_degree

    def __repr__(self) -> str:
        return f"StarHomotopy(vertex={self.chart.vertex}, eps={self.kernel.eps})"

    def evaluate(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float).reshape(-1, len(facet) - 1)
        y, inside = _ball_points(self.chart, facet, coords)
        out = np.zeros((len(coords), math.comb(len(facet) - 1, self.degree)))
        if inside.any():
            J = self.chart.forward_jacobian(facet, coords[inside])
            out[inside] = pull_coefficients(J, self.local.evaluate(y[inside]), self.degree)
        return out

    def exterior_d(self) -> ComplexField:
        return FiniteDifferenceField(self)


class FiniteDifferenceField(ComplexField):
    """``d`` of a field by one-sided second-order differences inside every facet.

    Along ``x_j`` the stencil steps toward whichever of the vertices ``v_0``
    and ``v_j`` is farther, so it stays in the facet; the side depends only
    on the point.
    """

    def __init__(self, field: ComplexField, step: float = FD_STEP):
        super().__init__(field.complex, field.degree + 1)
        self.field = field
        self.step = step
        self.default_quadrature_degree = field.default_quadrature_degree

    def __repr__(self) -> str:
        return f"FiniteDifferenceField({self.field!r}, step={self.step})"

    def evaluate(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        m, k = len(facet) - 1, self.field.degree
        coords = np.asarray(coords, dtype=float).reshape(-1, m)
        if k >= m:
            return np.zeros((len(coords), math.comb(m, k + 1)))
        t = to_barycentric(coords)
        f0 = self.field.evaluate(facet, coords)
        partials = np.empty((m, len(coords), f0.shape[1]))
        for j in range(m):
            side = np.where(t[:, j + 1] < t[:, 0], 1.0, -1.0)
            shift = np.zeros_like(coords)
            shift[:, j] = side * self.step
            f1 = self.field.evaluate(facet, coords + shift)
            f2 = self.field.evaluate(facet, coords + 2 * shift)
            partials[j] = (-3 * f0 + 4 * f1 - f2) / (2 * self.step * side)[:, None]
        return exterior_d_arrays(partials, m, k)

    def exterior_d(self) -> ComplexField:
        return PiecewiseForm.zero(self.complex, self.degree + 1)


def fit_star_kernel(
    chart: StarChart,
    eps: Any = 0.1,
    profile: KernelProfile | str = KernelProfile.POLYNOMIAL,
    kernel_degree: int = 10,
    ball_degree: int = 8,
) -> tuple[KernelSpec, float]:
    """Halve ``eps`` until the localized flow moves no node of ``B_1`` by ``(1 - r') / 2``.

    ``r'`` is the chart radius of the shrunken star.

    Returns:
        tuple[KernelSpec, float]: the kernel and its largest displacement

    Raises:
        SupportError: if no width passes after repeated halving
    """
    n = chart.ambient_dim
    limit = (1.0 - chart.inner_radius) / 2
    if limit <= 0:
        raise SupportError(f"The shrunken star of vertex {chart.vertex} does not fit in B_1")
    diffeo = BallDiffeo(n)
    points, _ = ball_rule(n, ball_degree)
    kernel = make_kernel(n, profile, eps)
    for _ in range(MAX_HALVINGS):
        v, _ = kernel.nodes(kernel_degree)
        x = np.repeat(points, len(v), axis=0)
        w = np.tile(float(kernel.eps) * v, (len(points), 1))
        shift = float(np.max(np.linalg.norm(diffeo.flow(x, w) - x, axis=1)))
        if shift < limit:
            return kernel, shift
        logger.warning(
            f"Star {chart.vertex}: eps={kernel.eps} moves B_1 by {shift:.4g} >= {limit:.4g}, "
            "halving"
        )
        kernel = make_kernel(n, profile, kernel.eps / 2)
    raise SupportError(f"No kernel width fits the star of vertex {chart.vertex}")


def _combine(fields: list[ComplexField]) -> ComplexField | None:
    if not fields:
        return None
    if len(fields) == 1:
        return fields[0]
    return LinearCombinationField([(1.0, f) for f in fields])


@dataclass
class GlobalRegularization:
    """Output of :func:`global_regularize`.

    Attributes:
        regularized (ComplexField): ``R w = R_1 ... R_N w``, ``R_N`` first
        homotopy (ComplexField | None): ``A w = sum_i R_1 ... R_(i-1) A_i w``,
            ``None`` for 0-forms
        homotopy_of_derivative (ComplexField | None): ``A d w``, ``None``
            when ``d w`` vanishes identically
        order (list[int]): star order, ``R_1`` first
        eps_schedule (dict[int, float]): final kernel width per star
        residual (float): L_p norm of ``R w - w - d A w - A d w``
        commutation_defect (float): L_p norm of ``d R w - R d w``
        norm_ratio (float): ``||R w||_p / ||w||_p``
        locality (dict): largest change made by ``R_i`` and largest value of
            ``A_i`` at nodes outside ``phi_i^-1(B_1)``, over all stars
    """

    regularized: ComplexField
    homotopy: ComplexField | None
    homotopy_of_derivative: ComplexField | None
    order: list[int]
    eps_schedule: dict[int, float]
    p: float
    residual: float = math.nan
    commutation_defect: float = math.nan
    norm_ratio: float = math.nan
    locality: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "order": self.order,
            "eps_schedule": {str(v): eps for v, eps in self.eps_schedule.items()},
            "p": self.p,
            "residual": self.residual,
            "commutation_defect": self.commutation_defect,
            "norm_ratio": self.norm_ratio,
            "locality": self.locality,
        }


def _locality(
    omega: ComplexField,
    stars: Sequence[tuple[StarChart, KernelSpec]],
    kernel_degree: int,
    quad_degree: int,
) -> dict[str, Any]:
    changed, leaked = 0.0, 0.0
    for chart, kernel in stars:
        R = StarRegularization(omega, chart, kernel, kernel_degree)
        A = StarHomotopy(omega, chart, kernel, kernel_degree) if omega.degree > 0 else None
        for facet, points, _ in omega.quadrature(quad_degree):
            _, inside = _ball_points(chart, facet, points)
            outside = points[~inside]
            if not len(outside):
                continue
            delta = R.evaluate(facet, outside) - omega.evaluate(facet, outside)
            changed = max(changed, float(np.max(np.abs(delta), initial=0.0)))
            if A is not None:
                values = np.abs(A.evaluate(facet, outside))
                leaked = max(leaked, float(np.max(values, initial=0.0)))
    return {
        "max_change_outside": changed,
        "max_homotopy_outside": leaked,
        "holds": changed == 0 and leaked == 0,
    }


def global_regularize(
    omega: ComplexField,
    eps: Any = 0.1,
    profile: KernelProfile | str = KernelProfile.POLYNOMIAL,
    radius: float = DEFAULT_RADIUS,
    order: Sequence[int] | None = None,
    charts: Mapping[int, StarChart] | None = None,
    kernel_degree: int = 10,
    p: float = 2.0,
    quad_degree: int = 20,
    check_locality: bool = True,
) -> GlobalRegularization:
    """The global operators ``R`` and ``A`` of a form on a finite complex.

    Every star gets its chart and a kernel whose width is halved from
    ``eps`` until the support condition of :func:`fit_star_kernel` holds.
    ``R = R_1 ... R_N`` over the star order and
    ``A = sum_i R_1 ... R_(i-1) A_i``, so that ``R - 1 = d A + A d``;
    ``d A`` is taken by finite differences on the facets. Evaluating the
    composition costs a factor of the kernel node count per star, so
    surfaces with many stars call for a low ``kernel_degree``.

    Args:
        omega (ComplexField): the form, usually a PiecewiseForm
        eps (number): starting kernel width
        profile (KernelProfile | str): kernel profile
        radius (float): image radius of the built-in charts
        order (Sequence[int], optional): star order, ascending vertex ids by
            default
        charts (Mapping[int, StarChart], optional): user charts
        kernel_degree (int): degree of the kernel rule
        p (float): exponent of the reported norms
        quad_degree (int): degree of the rule for the reported norms
        check_locality (bool): measure the per-star locality

    Raises:
        MissingChartError: if a star has no chart
        SupportError: if no kernel width fits some star
    """
    p = _check_p(p)
    K = omega.complex
    all_charts = star_charts(K, radius, charts)
    order = sorted(K.vertices) if order is None else [K.check_vertex(v) for v in order]
    stars: list[tuple[StarChart, KernelSpec]] = []
    schedule: dict[int, float] = {}
    for v in order:
        chart = all_charts[v]
        if chart is None:
            continue
        kernel, _ = fit_star_kernel(chart, eps, profile, kernel_degree)
        stars.append((chart, kernel))
        schedule[v] = float(kernel.eps)
    logger.info(f"eps schedule: {schedule}")

    def compose(field: ComplexField, upto: int) -> ComplexField:
        # R_1 ... R_upto applied to field, R_upto first
        for chart, kernel in reversed(stars[:upto]):
            field = StarRegularization(field, chart, kernel, kernel_degree)
        return field

    regularized = compose(omega, len(stars))
    d_omega = omega.exterior_d()
    skip_d = omega.degree >= K.dim or (isinstance(d_omega, PiecewiseForm) and d_omega.is_zero())
    homotopy_terms, derivative_terms = [], []
    for i, (chart, kernel) in enumerate(stars):
        if omega.degree > 0:
            A = StarHomotopy(omega, chart, kernel, kernel_degree)
            homotopy_terms.append(compose(A, i))
        if not skip_d:
            Ad = StarHomotopy(
                d_omega, chart, kernel, kernel_degree, pushed=chart.push(omega).exterior_d()
            )
            derivative_terms.append(compose(Ad, i))
    result = GlobalRegularization(
        regularized=regularized,
        homotopy=_combine(homotopy_terms),
        homotopy_of_derivative=_combine(derivative_terms),
        order=[chart.vertex for chart, _ in stars],
        eps_schedule=schedule,
        p=p,
    )
    if not stars:
        logger.info("No star has a chart; R is the identity")
    terms: list[tuple[float, ComplexField]] = [(1.0, regularized), (-1.0, omega)]
    if result.homotopy is not None:
        terms.append((-1.0, result.homotopy.exterior_d()))
    if result.homotopy_of_derivative is not None:
        terms.append((-1.0, result.homotopy_of_derivative))
    result.residual = lp_norm(LinearCombinationField(terms), p, quad_degree)
    if omega.degree < K.dim:
        defect = LinearCombinationField(
            [(1.0, FiniteDifferenceField(regularized)), (-1.0, regularized.exterior_d())]
        )
        result.commutation_defect = lp_norm(defect, p, quad_degree)
    else:
        result.commutation_defect = 0.0
    base = lp_norm(omega, p, quad_degree)
    result.norm_ratio = lp_norm(regularized, p, quad_degree) / base if base > 0 else 0.0
    if check_locality:
        result.locality = _locality(omega, stars, kernel_degree, quad_degree)
    logger.info(f"Global regularization residual {result.residual:.3e} in L_{p}")
    return result


def order_dependence(
    omega: ComplexField,
    eps: Any = 0.1,
    p: float = 2.0,
    quad_degree: int = 20,
    **kwargs: Any,
) -> dict[str, Any]:
    """Compare ``R w`` for ascending and descending star orders.

    The composition is order sensitive; the report records the L_p distance
    between the two results next to both residuals.
    """
    vertices = sorted(omega.complex.vertices)
    first = global_regularize(
        omega, eps, order=vertices, p=p, quad_degree=quad_degree, check_locality=False, **kwargs
    )
    second = global_regularize(
        omega,
        eps,
        order=vertices[::-1],
        p=p,
        quad_degree=quad_degree,
        check_locality=False,
        **kwargs,
    )
    difference = LinearCombinationField([(1.0, first.regularized), (-1.0, second.regularized)])
    return {
        "orders": [first.order, second.order],
        "difference": lp_norm(difference, p, quad_degree),
        "residuals": [first.residual, second.residual],
    }


def complex_smoothness_samples(
    field: ComplexField,
    steps: Sequence[float] = (1e-2, 5e-3, 2.5e-3),
    quad_degree: int = 6,
) -> dict[str, Any]:
    """Finite difference slopes of a field on every facet at a few scales.

    Converging slopes certify that the sampled field is differentiable at
    the quadrature nodes.
    """
    slopes = []
    for h in steps:
        fd = FiniteDifferenceField(field, h)
        worst = 0.0
        for facet, points, _ in field.quadrature(quad_degree):
            values = pointwise_norm(fd.evaluate(facet, points))
            worst = max(worst, float(np.max(values, initial=0.0)))
        slopes.append(worst)
    drift = max((abs(a - b) for a, b in zip(slopes, slopes[1:])), default=0.0)
    return {"steps": list(steps), "max_slope": slopes, "drift": drift}
