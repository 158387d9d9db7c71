from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING, Any

import numpy as np

from derham_lab._errors import DegreeError, DimensionMismatchError, QuadratureError
from derham_lab.forms._norms import _check_p, _reduce, pointwise_norm
from derham_lab.forms._patch import PatchField, PolyPatchField, as_patch_field, patch_derivative
from derham_lab.forms._poly import PolyForm, interior_arrays, pull_coefficients
from derham_lab.forms._quadrature import ball_rule, gauss_legendre
from derham_lab.mollify._diffeo import BallDiffeo

if TYPE_CHECKING:
    from derham_lab.mollify._kernel import KernelSpec

logger = logging.getLogger(__name__)

# (points x kernel nodes) pairs handled per vectorized batch
PAIR_BATCH = 4096
RULE_TOL = 1e-8


def _check(field: PatchField, kernel: KernelSpec, diffeo: BallDiffeo | None) -> BallDiffeo:
    if field.dim != kernel.dim:
        raise DimensionMismatchError(f"Kernel on R^{kernel.dim} and form on R^{field.dim}")
    if field.dim > 2:
        logger.debug("Flow paths are not split at kinks for n > 2")
    return BallDiffeo(field.dim) if diffeo is None else diffeo


class LocalRegularization(PatchField):
    """``R_eps w = sum_j W_j s*_(eps v_j) w`` for the localized flow ``s``.

    Smooth inside ``B_1`` and equal to ``w`` outside.
    """

    def __init__(
        self,
        field: PatchField,
        kernel: KernelSpec,
        diffeo: BallDiffeo | None = None,
        kernel_degree: int = 10,
    ):
        super().__init__(field.dim, field.degree)
        self.diffeo = _check(field, kernel, diffeo)
        self.field = field
        self.kernel = kernel
        self.kernel_degree = kernel_degree
        self.kink_points = field.kink_points
        self.kink_angles = field.kink_angles
        v, self.weights = kernel.nodes(kernel_degree)
        self.shifts = float(kernel.eps) * v

    def __repr__(self) -> str:
        return f"LocalRegularization({self.field!r}, eps={self.kernel.eps})"

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, self.dim)
        out = np.zeros((len(points), math.comb(self.dim, self.degree)))
        inside = self.diffeo.inside(points)
        if (~inside).any():
            out[~inside] = self.field.evaluate(points[~inside])
        X = points[inside]
        M = len(self.weights)
        chunk = max(1, PAIR_BATCH // M)
        values = []
        for start in range(0, len(X), chunk):
            x = np.repeat(X[start : start + chunk], M, axis=0)
            w = np.tile(self.shifts, (len(x) // M, 1))
            moved = self.diffeo.flow(x, w)
            J = self.diffeo.flow_jacobian(x, w)
            pulled = pull_coefficients(J, self.field.evaluate(moved), self.degree)
            pulled = pulled.reshape(-1, M, pulled.shape[1])
            values.append(np.einsum("nmc,m->nc", pulled, self.weights))
        if values:
            out[inside] = np.concatenate(values)
        return out

    def kernel_rule_defect(self, points: np.ndarray) -> float:
        """Largest change of the values when the kernel rule is raised by two degrees."""
        finer = LocalRegularization(self.field, self.kernel, self.diffeo, self.kernel_degree + 2)
        return float(np.max(np.abs(self.evaluate(points) - finer.evaluate(points)), initial=0.0))

    def exterior_d(self) -> PatchField:
        return LocalRegularization(
            self.field.exterior_d(), self.kernel, self.diffeo, self.kernel_degree
        )


class FiniteDifferencePatch(PatchField):
    """``d`` of a patch field by central differences."""

    def __init__(self, field: PatchField, step: float = 1e-5):
        super().__init__(field.dim, field.degree + 1)
        self.field = field
        self.step = step

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        return patch_derivative(self.field, points, self.step)

    def exterior_d(self) -> PatchField:
        return PolyPatchField(PolyForm.zero(self.dim, self.degree + 1))


class LocalHomotopy(PatchField):
    """``A_eps w = sum_j W_j int_0^1 s*_(t eps v_j) (i_X w) dt`` for the localized flow.

    ``X`` is the generator ``Dh(h^-1 x) eps v_j`` of the flow. The time
    integral uses Gauss nodes on ``panels`` equal pieces of [0, 1], further
    split where the flow path crosses a kink of the field; in ``h^-1``
    coordinates flow paths are straight lines and rays stay rays.

    Raises:
        DegreeError: on 0-forms
    """

    def __init__(
        self,
        field: PatchField,
        kernel: KernelSpec,
        diffeo: BallDiffeo | None = None,
        kernel_degree: int = 10,
        time_nodes: int = 6,
        panels: int = 2,
    ):
        if field.degree == 0:
            raise DegreeError("A_eps lowers the degree and is zero on 0-forms")
        super().__init__(field.dim, field.degree - 1)
        self.diffeo = _check(field, kernel, diffeo)
        self.field = field
        self.kernel = kernel
        self.kernel_degree = kernel_degree
        self.time_nodes = time_nodes
        self.panels = panels
        v, self.weights = kernel.nodes(kernel_degree)
        self.shifts = float(kernel.eps) * v

    def __repr__(self) -> str:
        return f"LocalHomotopy({self.field!r}, eps={self.kernel.eps})"

    def _crossings(self, Y: np.ndarray, W: np.ndarray) -> np.ndarray:
        """Times in (0, 1) where ``Y + t W`` meets a kink; 1.0 pads missing ones."""
        columns = []
        if self.dim == 1:
            for p in self.field.kink_points:
                if abs(p) >= 1:
                    continue
                target = float(self.diffeo.rho_inv(np.array(p)))
                with np.errstate(divide="ignore", invalid="ignore"):
                    columns.append((target - Y[:, 0]) / W[:, 0])
        elif self.dim == 2:
            for angle in self.field.kink_angles:
                u = np.array([math.cos(angle), math.sin(angle)])
                with np.errstate(divide="ignore", invalid="ignore"):
                    cross_y = Y[:, 0] * u[1] - Y[:, 1] * u[0]
                    cross_w = W[:, 0] * u[1] - W[:, 1] * u[0]
                    t = -cross_y / cross_w
                    ahead = (Y + t[:, None] * W) @ u > 0
                columns.append(np.where(ahead, t, np.nan))
            if self.field.kink_angles:
                # closest approach to the center, where angular terms peak
                with np.errstate(divide="ignore", invalid="ignore"):
                    columns.append(-np.sum(Y * W, axis=1) / np.sum(W**2, axis=1))
        if not columns:
            return np.ones((len(Y), 0))
        times = np.stack(columns, axis=1)
        with np.errstate(invalid="ignore"):
            valid = np.isfinite(times) & (times > 0) & (times < 1)
        return np.where(valid, times, 1.0)

    def _integrate(self, x: np.ndarray, w: np.ndarray, time_nodes: int) -> np.ndarray:
        n, k = self.dim, self.field.degree
        Y = self.diffeo.h_inv(x)
        fixed = np.broadcast_to(np.linspace(0.0, 1.0, self.panels + 1), (len(x), self.panels + 1))
        breaks = np.sort(np.concatenate([fixed, self._crossings(Y, w)], axis=1), axis=1)
        a, b = breaks[:, :-1], breaks[:, 1:]
        xi, gw = gauss_legendre(time_nodes, 0.0, 1.0)
        t = a[..., None] + (b - a)[..., None] * xi
        wt = ((b - a)[..., None] * gw).reshape(len(x), -1)
        Yt = (Y[:, None, None, :] + t[..., None] * w[:, None, None, :]).reshape(-1, n)
        rep = t.shape[1] * t.shape[2]
        w_rep = np.repeat(w, rep, axis=0)
        D = self.diffeo.h_jacobian(Yt)
        velocity = np.einsum("qij,qj->qi", D, w_rep)
        J = D @ np.repeat(self.diffeo.h_inv_jacobian(x), rep, axis=0)
        values = self.field.evaluate(self.diffeo.h(Yt))
        contracted = interior_arrays(velocity, values, n, k)
        pulled = pull_coefficients(J, contracted, k - 1)
        return np.einsum("pqc,pq->pc", pulled.reshape(len(x), rep, -1), wt)

    def evaluate(self, points: np.ndarray, time_nodes: int | None = None) -> np.ndarray:
        time_nodes = self.time_nodes if time_nodes is None else time_nodes
        points = np.asarray(points, dtype=float).reshape(-1, self.dim)
        out = np.zeros((len(points), math.comb(self.dim, self.degree)))
        inside = self.diffeo.inside(points)
        X = points[inside]
        M = len(self.weights)
        chunk = max(1, PAIR_BATCH // M)
        values = []
        for start in range(0, len(X), chunk):
            x = np.repeat(X[start : start + chunk], M, axis=0)
            w = np.tile(self.shifts, (len(x) // M, 1))
            pair_values = self._integrate(x, w, time_nodes)
            pair_values = pair_values.reshape(-1, M, pair_values.shape[1])
            values.append(np.einsum("nmc,m->nc", pair_values, self.weights))
        if values:
            out[inside] = np.concatenate(values)
        return out

    def time_rule_defect(self, points: np.ndarray) -> float:
        """Largest change of the values when the time rule is doubled."""
        coarse = self.evaluate(points)
        fine = self.evaluate(points, 2 * self.time_nodes)
        return float(np.max(np.abs(coarse - fine), initial=0.0))

    def kernel_rule_defect(self, points: np.ndarray) -> float:
        """Largest change of the values when the kernel rule is raised by two degrees."""
        finer = LocalHomotopy(
            self.field,
            self.kernel,
            self.diffeo,
            self.kernel_degree + 2,
            self.time_nodes,
            self.panels,
        )
        return float(np.max(np.abs(self.evaluate(points) - finer.evaluate(points)), initial=0.0))

    def exterior_d(self) -> PatchField:
        return FiniteDifferencePatch(self)


def regularize_local(
    omega: PatchField | PolyForm,
    kernel: KernelSpec,
    diffeo: BallDiffeo | None = None,
    kernel_degree: int = 10,
    rule_tol: float | None = RULE_TOL,
) -> LocalRegularization:
    """``R_eps`` on a patch containing ``B_1``.

    Args:
        rule_tol (float, optional): largest accepted change of the values
            under a finer kernel rule, for fields that are not polynomial;
            ``None`` skips the comparison

    Raises:
        QuadratureError: if the kernel rule is too coarse for the field
    """
    operator = LocalRegularization(as_patch_field(omega), kernel, diffeo, kernel_degree)
    _check_kernel_rule(operator, 0, rule_tol)
    return operator


def homotopy_local(
    omega: PatchField | PolyForm,
    kernel: KernelSpec,
    diffeo: BallDiffeo | None = None,
    kernel_degree: int = 10,
    time_nodes: int = 6,
    rule_tol: float | None = RULE_TOL,
) -> LocalHomotopy:
    """``A_eps`` on a patch containing ``B_1``.

    Raises:
        DegreeError: on 0-forms
        QuadratureError: if the kernel rule is too coarse for the field
    """
    operator = LocalHomotopy(as_patch_field(omega), kernel, diffeo, kernel_degree, time_nodes)
    # i_v raises the degree in v by one
    _check_kernel_rule(operator, 1, rule_tol)
    return operator


def _check_kernel_rule(
    operator: LocalRegularization | LocalHomotopy, extra: int, rule_tol: float | None
) -> None:
    """Reject kernel rules that cannot resolve the field.

    Polynomial fields under the polynomial kernel are checked by degree: the
    integrand in ``v`` of a translate has the degree of the form plus
    ``extra``. Other fields are compared against the next kernel rule at
    nodes of the ball of radius 0.9.
    """
    field, kernel, kernel_degree = operator.field, operator.kernel, operator.kernel_degree
    available = kernel.exact_degree(kernel_degree)
    if isinstance(field, PolyPatchField) and available is not None:
        needed = field.form.poly_degree() + extra
        if needed > available:
            raise QuadratureError(
                f"A kernel rule of degree {kernel_degree} is exact up to degree {available} "
                f"in v, the form needs {needed}"
            )
        return
    if rule_tol is None:
        return
    if field.dim > 3:
        logger.debug(f"No ball rule in dimension {field.dim}, kernel rule not compared")
        return
    points, _ = ball_rule(field.dim, 4, radius=0.9)
    scale = float(np.max(np.abs(operator.evaluate(points)), initial=0.0))
    defect = operator.kernel_rule_defect(points)
    if defect > rule_tol * max(1.0, scale):
        raise QuadratureError(
            f"Kernel rule of degree {kernel_degree} moves by {defect:.3g} under a finer rule, "
            f"above the tolerance {rule_tol:.3g}"
        )
    logger.debug(f"Kernel rule of degree {kernel_degree}: defect {defect:.3g}")


def local_homotopy_residual(
    omega: PatchField | PolyForm,
    kernel: KernelSpec,
    p: float = 1.0,
    degree: int = 12,
    kernel_degree: int = 10,
    step: float = 1e-5,
) -> dict[str, Any]:
    """L_p norm over ``B_1`` of ``R_eps w - w - d A_eps w - A_eps d w``.

    ``d A_eps w`` is taken by central differences.
    """
    p = _check_p(p)
    field = as_patch_field(omega)
    n, k = field.dim, field.degree
    points, weights = ball_rule(n, degree)
    residual = regularize_local(field, kernel, kernel_degree=kernel_degree).evaluate(points)
    residual = residual - field.evaluate(points)
    if k > 0:
        A = homotopy_local(field, kernel, kernel_degree=kernel_degree)
        residual = residual - patch_derivative(A, points, step)
    if k < n:
        residual = residual - homotopy_local(
            field.exterior_d(), kernel, kernel_degree=kernel_degree
        ).evaluate(points)
    values = pointwise_norm(residual)
    return {
        "p": p,
        "residual": _reduce(values, weights, p),
        "max_pointwise": float(values.max(initial=0.0)),
    }


def smoothness_samples(
    field: PatchField, points: np.ndarray, steps: tuple[float, ...] = (1e-2, 5e-3, 2.5e-3)
) -> dict[str, Any]:
    """Finite difference slopes of a field at a few scales.

    Bounded, converging slopes on a compact set inside ``B_1`` certify that
    the samples come from a smooth field.
    """
    points = np.asarray(points, dtype=float).reshape(-1, field.dim)
    slopes = [
        float(np.max(pointwise_norm(patch_derivative(field, points, h)), initial=0.0))
        for h in steps
    ]
    drift = max(abs(a - b) for a, b in zip(slopes, slopes[1:])) if len(slopes) > 1 else 0.0
    return {"steps": list(steps), "max_slope": slopes, "drift": drift}
