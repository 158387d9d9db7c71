from __future__ import annotations

import logging
import math
from typing import Any

import numpy as np

from derham_lab._errors import DegreeError, SupportError
from derham_lab.forms._norms import _check_p, _reduce
from derham_lab.forms._poly import PolyForm
from derham_lab.forms._quadrature import gauss_legendre

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi


def _wrap(u: np.ndarray, start: float) -> np.ndarray:
    """Angles shifted into ``[start, start + 2 pi)``."""
    return start + np.mod(np.asarray(u, dtype=float) - start, TWO_PI)


class CircleField:
    """A top degree form on the unit circle, extended by zero off an arc.

    The arc ``B = (a, b)`` carries the form ``omega = c(s) ds`` in the arc
    parameter ``s = (u - a) / (b - a)``. The antipodal arc ``B'`` is the image
    of ``B`` under the rotation by pi, the end of the homotopy moving ``B``
    off itself. Coefficients are reported in the angle frame ``du``.

    Attributes:
        arc (tuple[float, float]): end angles of ``B``
        omega (PolyForm): the form on ``B``, dimension 1 and degree 1
    """

    dim = 1
    degree = 1

    def __init__(self, arc: tuple[float, float], omega: PolyForm):
        self.arc = (float(arc[0]), float(arc[1]))
        self.omega = omega
        self.length = self.arc[1] - self.arc[0]

    def __repr__(self) -> str:
        return f"CircleField(arc={self.arc}, omega={self.omega})"

    @property
    def moved_arc(self) -> tuple[float, float]:
        return (self.arc[0] + math.pi, self.arc[1] + math.pi)

    def _on_arc(self, u: np.ndarray, start: float) -> tuple[np.ndarray, np.ndarray]:
        s = (_wrap(u, start) - start) / self.length
        return (s >= 0) & (s <= 1), s

    def moved_form(self, u: np.ndarray) -> np.ndarray:
        """``w~``: the form on ``B``, its rotated copy on ``B'`` and zero between.

        Between the arcs the coefficient functions are constant along the
        rotation, so the pulled top form vanishes there.
        """
        u = np.asarray(u, dtype=float).ravel()
        out = np.zeros((len(u), 1))
        for start in (self.arc[0], self.moved_arc[0]):
            inside, s = self._on_arc(u, start)
            if inside.any():
                out[inside] = self.omega.evaluate(s[inside][:, None]) / self.length
        return out

    def bump(self, u: np.ndarray) -> np.ndarray:
        """Piecewise linear bump, 1 on ``B``, 0 on ``B'``, linear across both gaps."""
        u = _wrap(u, self.arc[0]) - self.arc[0]
        L, gap = self.length, math.pi - self.length
        return np.select(
            [u <= L, u <= math.pi, u <= math.pi + L],
            [np.ones_like(u), (math.pi - u) / gap, np.zeros_like(u)],
            (u - math.pi - L) / gap,
        )

    def evaluate(self, u: np.ndarray) -> np.ndarray:
        """Coefficient of ``du`` of ``beta w~`` at angles ``u``, shape (N, 1)."""
        return self.bump(u)[:, None] * self.moved_form(u)

    def exterior_d(self) -> PolyForm:
        return PolyForm.zero(1, 2)

    def panels(self) -> list[tuple[float, float]]:
        a = self.arc[0]
        L = self.length
        return [
            (a, a + L),
            (a + L, a + math.pi),
            (a + math.pi, a + math.pi + L),
            (a + math.pi + L, a + TWO_PI),
        ]

    def _rule(self, degree: int) -> tuple[np.ndarray, np.ndarray]:
        nodes, weights = [], []
        for lo, hi in self.panels():
            x, w = gauss_legendre(degree // 2 + 2, lo, hi)
            nodes.append(x)
            weights.append(w)
        return np.concatenate(nodes), np.concatenate(weights)

    def lp_norm(self, p: float = 2.0, quad_degree: int = 12) -> float:
        p = _check_p(p)
        u, w = self._rule(quad_degree)
        return _reduce(np.abs(self.evaluate(u)[:, 0]), w, p)

    def integral(self, quad_degree: int = 12) -> float:
        u, w = self._rule(quad_degree)
        return float(np.dot(w, self.evaluate(u)[:, 0]))

    def support_defect(self, quad_degree: int = 12) -> float:
        """Largest absolute value at quadrature nodes outside ``B``."""
        u, _ = self._rule(quad_degree)
        inside, _ = self._on_arc(u, self.arc[0])
        values = np.abs(self.evaluate(u[~inside])[:, 0])
        return float(values.max(initial=0.0))


def extend_by_zero_sphere(arc: tuple[float, float], omega: PolyForm) -> CircleField:
    """Extend a top degree form on an arc of the circle by zero.

    Args:
        arc (tuple[float, float]): end angles ``(a, b)`` of the arc ``B``,
            ``0 < b - a < pi`` so that ``B`` and its antipodal copy are disjoint
        omega (PolyForm): 1-form on ``B`` in the arc parameter ``s`` in [0, 1]

    Returns:
        CircleField: closed form on the circle, equal to ``omega`` on ``B`` and
            zero elsewhere

    Raises:
        DegreeError: if ``omega`` is not of top degree
        SupportError: if the arc is empty or too long to move off itself
    """
    if omega.dim != 1 or omega.degree != 1:
        raise DegreeError(
            f"Extension by zero needs a top degree form on the arc, got dim={omega.dim}, "
            f"degree={omega.degree}"
        )
    a, b = float(arc[0]), float(arc[1])
    if not 0 < b - a < math.pi:
        raise SupportError(f"Arc ({a}, {b}) must have length in (0, pi) to be moved off itself")
    return CircleField((a, b), omega)


def sphere_extension_report(
    field: CircleField, p: float = 2.0, quad_degree: int = 12
) -> dict[str, Any]:
    """L_p norms of the arc form and of its extension by zero, with the support defect."""
    p = _check_p(p)
    x, w = gauss_legendre(quad_degree // 2 + 2, 0.0, 1.0)
    source = np.abs(field.omega.evaluate(x[:, None])[:, 0]) / field.length
    lp_in = _reduce(source, w * field.length, p)
    lp_out = field.lp_norm(p, quad_degree)
    return {
        "p": p,
        "lp_input": lp_in,
        "lp_output": lp_out,
        "support_defect": field.support_defect(quad_degree),
        "closed": True,
        "holds": bool(lp_out <= lp_in * (1 + 1e-10) + 1e-14),
    }
