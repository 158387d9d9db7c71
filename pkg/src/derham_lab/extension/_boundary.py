from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING, Any

import numpy as np

from derham_lab._complex import SimplicialComplex, boundary_faces
from derham_lab._errors import ComplexError
from derham_lab.forms._fields import ComplexField
from derham_lab.forms._norms import _check_p, lp_norm, sobolev_norm
from derham_lab.forms._piecewise import PiecewiseForm, face_embedding_arrays, to_barycentric
from derham_lab.forms._poly import pull_coefficients, wedge_arrays
from derham_lab.forms._quadrature import gauss_legendre, measure_factor, stroud_rule

if TYPE_CHECKING:
    from collections.abc import Iterator

    from derham_lab._complex import Simplex

logger = logging.getLogger(__name__)


def _barycentric_jacobian(n: int) -> np.ndarray:
    """``dt / dx`` for the chart ``t = (1 - sum x, x)``, shape (n + 1, n)."""
    return np.vstack([-np.ones((1, n)), np.eye(n)])


class BoundaryExtension(ComplexField):
    """Radial collar extension of a form from the boundary of a simplex.

    Write ``lam = 1 - (n + 1) min_i t_i`` for the radial coordinate around the
    barycenter ``b`` (``lam = 1`` on the boundary, ``0`` at ``b``) and
    ``pi(x) = b + (x - b) / lam`` for the radial projection onto the boundary.
    On the collar ``lam >= inner_scale`` the extension is
    ``(1 - s) pi* omega`` with ``s = (1 - lam) / (1 - inner_scale)``; on the
    inner copy of the simplex scaled by ``inner_scale`` it vanishes.

    Args:
        boundary_field (ComplexField): form on the boundary complex
        simplex (Simplex): the simplex being filled
        inner_scale (float): scale of the inner copy where the result is zero
        derivative (bool): evaluate ``d`` of the extension instead; used by
            :meth:`exterior_d`
    """

    def __init__(
        self,
        boundary_field: ComplexField,
        simplex: Simplex,
        inner_scale: float = 0.5,
        derivative: bool = False,
    ):
        self.simplex = tuple(simplex)
        self.n = len(self.simplex) - 1
        super().__init__(SimplicialComplex([self.simplex]), boundary_field.degree + derivative)
        if not 0 < inner_scale < 1:
            raise ValueError(f"Inner scale must lie in (0, 1), got {inner_scale}")
        self.boundary_field = boundary_field
        self.boundary_derivative = boundary_field.exterior_d() if derivative else None
        self.inner_scale = float(inner_scale)
        self.derivative = derivative
        self.faces = [face for _, face in boundary_faces(self.simplex)]
        self.default_quadrature_degree = boundary_field.default_quadrature_degree + 4

    def __repr__(self) -> str:
        return f"BoundaryExtension(simplex={self.simplex}, degree={self.degree})"

    def evaluate(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        n, k = self.n, self.boundary_field.degree
        coords = np.asarray(coords, dtype=float).reshape(-1, n)
        out = np.zeros((len(coords), math.comb(n, self.degree)))
        t = to_barycentric(coords)
        nearest = np.argmin(t, axis=1)
        lam = 1.0 - (n + 1) * t[np.arange(len(t)), nearest]
        collar = lam >= self.inner_scale
        width = 1.0 - self.inner_scale
        b = np.full(n, 1.0 / (n + 1))
        T = _barycentric_jacobian(n)
        for i in np.unique(nearest[collar]):
            mask = collar & (nearest == i)
            x, l = coords[mask], lam[mask]
            face = self.faces[i]
            keep = [j for j in range(n + 1) if j != i]
            t_proj = (t[mask] - ((1.0 - l) / (n + 1))[:, None]) / l[:, None]
            y = t_proj[:, keep[1:]]
            grad_lam = -(n + 1) * T[i]
            D_pi = (
                np.eye(n)[None, :, :] / l[:, None, None]
                - np.einsum("ni,j->nij", x - b, grad_lam) / (l**2)[:, None, None]
            )
            J = np.einsum("ij,njk->nik", T[keep[1:]], D_pi)
            one_minus_s = 1.0 - (1.0 - l) / width
            pulled = pull_coefficients(J, self.boundary_field.evaluate(face, y), k)
            if not self.derivative:
                out[mask] = one_minus_s[:, None] * pulled
                continue
            d_pulled = pull_coefficients(J, self.boundary_derivative.evaluate(face, y), k + 1)
            ds = np.broadcast_to(-grad_lam / width, (len(x), n))
            out[mask] = one_minus_s[:, None] * d_pulled - wedge_arrays(ds, pulled, n, 1, k)
        return out

    def exterior_d(self) -> ComplexField:
        if self.derivative:
            return PiecewiseForm.zero(self.complex, self.degree + 1)
        return BoundaryExtension(self.boundary_field, self.simplex, self.inner_scale, True)

    def quadrature(
        self, degree: int | None = None
    ) -> Iterator[tuple[Simplex, np.ndarray, np.ndarray]]:
        """Cone rule over the collar: face rule times Gauss in ``lam``."""
        degree = self.default_quadrature_degree if degree is None else degree
        n = self.n
        b = np.full(n, 1.0 / (n + 1))
        y_points, y_weights = stroud_rule(n - 1, degree)
        lam, lam_weights = gauss_legendre(degree // 2 + 4, self.inner_scale, 1.0)
        points, weights = [], []
        for face in self.faces:
            E, offset = face_embedding_arrays(face, self.simplex)
            on_face = y_points @ E.T + offset
            for X, w_y in zip(on_face, y_weights):
                height = abs(np.linalg.det(np.column_stack([E, X - b])))
                points.append(b + lam[:, None] * (X - b))
                weights.append(w_y * lam_weights * lam ** (n - 1) * height)
        yield (
            self.simplex,
            np.concatenate(points),
            np.concatenate(weights) * measure_factor(n),
        )


def extend_from_boundary(
    omega: ComplexField, simplex: Simplex | None = None, inner_scale: float = 0.5
) -> BoundaryExtension:
    """Extend a form on the boundary of a simplex to the whole simplex.

    Args:
        omega (ComplexField): form on the boundary complex of ``simplex``
        simplex (Simplex, optional): inferred from the boundary complex
        inner_scale (float): scale of the inner copy where the result is zero

    Returns:
        BoundaryExtension: field on the simplex that agrees with ``omega`` on
            the boundary

    Raises:
        ComplexError: if ``omega`` does not live on the boundary of a simplex
        TraceMismatchError: if a piecewise input has incompatible traces
    """
    K = omega.complex
    if simplex is None:
        simplex = K.vertices
    simplex = tuple(sorted(simplex))
    expected = {face for _, face in boundary_faces(simplex)}
    if len(simplex) < 2 or set(K.facets) != expected:
        raise ComplexError(f"{K} is not the boundary of the simplex {simplex}")
    if isinstance(omega, PiecewiseForm):
        omega.check_compatible()
    return BoundaryExtension(omega, simplex, inner_scale)


def extension_norm_report(
    source: ComplexField, extension: ComplexField, p: float = 2.0, quad_degree: int | None = None
) -> dict[str, Any]:
    """Measured L_p and Sobolev ratios of an extension against its source."""
    p = _check_p(p)
    lp_in = lp_norm(source, p, quad_degree)
    lp_out = lp_norm(extension, p, quad_degree)
    sob_in = sobolev_norm(source, p, quad_degree)
    sob_out = sobolev_norm(extension, p, quad_degree)
    report = {
        "p": p,
        "lp_input": lp_in,
        "lp_output": lp_out,
        "sobolev_input": sob_in,
        "sobolev_output": sob_out,
        "lp_ratio": lp_out / lp_in if lp_in > 0 else 0.0,
        "sobolev_ratio": sob_out / sob_in if sob_in > 0 else 0.0,
    }
    report["lp_holds"] = bool(lp_out <= lp_in * (1 + 1e-10) + 1e-14)
    report["sobolev_holds"] = bool(sob_out <= sob_in * (1 + 1e-10) + 1e-14)
    if not report["sobolev_holds"]:
        logger.debug(f"Sobolev ratio {report['sobolev_ratio']:.4g} above 1 at p={p}")
    return report


def collar_lipschitz(n: int, inner_scale: float = 0.5, degree: int = 6) -> tuple[float, float]:
    """Smallest and largest singular value of the collar map on sample nodes.

    The collar map sends ``(y, s)`` with ``y`` on a face and ``s`` in [0, 1]
    to ``b + (1 - (1 - inner_scale) s)(y - b)``.
    """
    simplex = tuple(range(n + 1))
    b = np.full(n, 1.0 / (n + 1))
    y_points, _ = stroud_rule(n - 1, degree)
    s_nodes, _ = gauss_legendre(degree // 2 + 1, 0.0, 1.0)
    lower, upper = math.inf, 0.0
    for _, face in boundary_faces(simplex):
        E, offset = face_embedding_arrays(face, simplex)
        for X in y_points @ E.T + offset:
            for s in s_nodes:
                J = np.column_stack([(1 - (1 - inner_scale) * s) * E, -(1 - inner_scale) * (X - b)])
                singular = np.linalg.svd(J, compute_uv=False)
                lower = min(lower, float(singular.min()))
                upper = max(upper, float(singular.max()))
    return lower, upper
