from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from derham_lab.forms._patch import PatchField, as_patch_field
from derham_lab.forms._poly import pull_coefficients

if TYPE_CHECKING:
    from derham_lab.forms._poly import PolyForm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BallDiffeo:
    """The radial diffeomorphism ``h(y) = y / sqrt(1 + |y|^2)`` of R^n onto the open unit ball.

    It conjugates translations into the localized flow
    ``s_w(x) = h(h^-1(x) + w)`` on ``B_1``, extended by the identity outside.
    """

    dim: int

    @staticmethod
    def rho(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return r / np.sqrt(1.0 + r**2)

    @staticmethod
    def rho_inv(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return r / np.sqrt(1.0 - r**2)

    def _rows(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=float).reshape(-1, self.dim)

    def h(self, y: np.ndarray) -> np.ndarray:
        y = self._rows(y)
        return y / np.sqrt(1.0 + np.sum(y**2, axis=1))[:, None]

    def h_inv(self, x: np.ndarray) -> np.ndarray:
        """Inverse on the open ball.

        Raises:
            ValueError: if a point lies outside the open unit ball
        """
        x = self._rows(x)
        r2 = np.sum(x**2, axis=1)
        if np.any(r2 >= 1):
            raise ValueError("h^-1 is only defined on the open unit ball")
        return x / np.sqrt(1.0 - r2)[:, None]

    def h_jacobian(self, y: np.ndarray) -> np.ndarray:
        """``Dh(y) = I / s - y y^T / s^3`` with ``s = sqrt(1 + |y|^2)``, shape (N, n, n)."""
        y = self._rows(y)
        s = np.sqrt(1.0 + np.sum(y**2, axis=1))
        return (
            np.eye(self.dim)[None] / s[:, None, None]
            - np.einsum("ni,nj->nij", y, y) / (s**3)[:, None, None]
        )

    def h_inv_jacobian(self, x: np.ndarray) -> np.ndarray:
        """``Dh^-1(x) = I / c + x x^T / c^3`` with ``c = sqrt(1 - |x|^2)``."""
        x = self._rows(x)
        c = np.sqrt(1.0 - np.sum(x**2, axis=1))
        return (
            np.eye(self.dim)[None] / c[:, None, None]
            + np.einsum("ni,nj->nij", x, x) / (c**3)[:, None, None]
        )

    def inside(self, x: np.ndarray) -> np.ndarray:
        return np.sum(self._rows(x) ** 2, axis=1) < 1.0

    def flow(self, x: np.ndarray, w: np.ndarray) -> np.ndarray:
        """``s_w(x)``; ``w`` is one vector or one per point."""
        x = self._rows(x)
        w = np.broadcast_to(np.asarray(w, dtype=float), x.shape)
        out = x.copy()
        inside = self.inside(x)
        if inside.any():
            out[inside] = self.h(self.h_inv(x[inside]) + w[inside])
        return out

    def flow_jacobian(self, x: np.ndarray, w: np.ndarray) -> np.ndarray:
        x = self._rows(x)
        w = np.broadcast_to(np.asarray(w, dtype=float), x.shape)
        out = np.broadcast_to(np.eye(self.dim), (len(x), self.dim, self.dim)).copy()
        inside = self.inside(x)
        if inside.any():
            xi = x[inside]
            out[inside] = self.h_jacobian(self.h_inv(xi) + w[inside]) @ self.h_inv_jacobian(xi)
        return out

    def generator(self, x: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Velocity ``d/dt s_(tw)(x)`` at ``t = 0``; zero outside the ball."""
        x = self._rows(x)
        w = np.broadcast_to(np.asarray(w, dtype=float), x.shape)
        out = np.zeros_like(x)
        inside = self.inside(x)
        if inside.any():
            J = self.h_jacobian(self.h_inv(x[inside]))
            out[inside] = np.einsum("nij,nj->ni", J, w[inside])
        return out


class FlowPullbackField(PatchField):
    """``s*_w field`` for the localized flow of a ball diffeomorphism."""

    def __init__(self, diffeo: BallDiffeo, w: np.ndarray, field: PatchField):
        super().__init__(field.dim, field.degree)
        self.diffeo = diffeo
        self.w = np.asarray(w, dtype=float)
        self.field = field

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, self.dim)
        moved = self.diffeo.flow(points, self.w)
        J = self.diffeo.flow_jacobian(points, self.w)
        return pull_coefficients(J, self.field.evaluate(moved), self.degree)

    def exterior_d(self) -> PatchField:
        return FlowPullbackField(self.diffeo, self.w, self.field.exterior_d())


def localized_flow_pullback(
    diffeo: BallDiffeo, w: np.ndarray, field: PatchField | PolyForm, points: np.ndarray
) -> np.ndarray:
    """Coefficients of ``s*_w field`` at (N, n) points; the identity outside ``B_1``."""
    return FlowPullbackField(diffeo, w, as_patch_field(field)).evaluate(points)


def flow_group_law_defect(
    diffeo: BallDiffeo,
    w: np.ndarray,
    t0: float,
    t1: float,
    field: PatchField | PolyForm,
    points: np.ndarray,
) -> float:
    """``max |s*_((t0 + t1) w) - s*_(t0 w) s*_(t1 w)|`` over the points."""
    field = as_patch_field(field)
    w = np.asarray(w, dtype=float)
    combined = localized_flow_pullback(diffeo, (t0 + t1) * w, field, points)
    inner = FlowPullbackField(diffeo, t1 * w, field)
    stepwise = localized_flow_pullback(diffeo, t0 * w, inner, points)
    return float(np.max(np.abs(combined - stepwise), initial=0.0))
