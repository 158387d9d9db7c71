from __future__ import annotations

import logging
import math
from typing import Any

import numpy as np
import sympy as sp

from derham_lab.forms._norms import _check_p, pointwise_norm
from derham_lab.forms._poly import AffineMap, PolyForm, coordinates, exterior_d, pullback
from derham_lab.forms._quadrature import gauss_legendre, measure_factor, stroud_rule

logger = logging.getLogger(__name__)


def cylinder_projection(m: int) -> AffineMap:
    """``(x, s) -> x`` from ``R^m x R`` to ``R^m``."""
    return AffineMap(sp.eye(m).row_join(sp.zeros(m, 1)))


def extend_cylinder(omega: PolyForm) -> PolyForm:
    """``(1 - s) pr* omega`` on ``M x [0, 1]``.

    The collar coordinate ``s`` is the last coordinate ``x_(m+1)``, so the
    result restricts to ``omega`` at ``s = 0`` and to zero at ``s = 1``.
    """
    m = omega.dim
    s = coordinates(m + 1)[m]
    return pullback(cylinder_projection(m), omega) * (1 - s)


def cylinder_end(form: PolyForm, s: Any) -> PolyForm:
    """Trace of a form on ``M x [0, 1]`` on the slice ``M x {s}``."""
    m = form.dim - 1
    slice_map = AffineMap(sp.eye(m).col_join(sp.zeros(1, m)), [0] * m + [s])
    return pullback(slice_map, form)


def _base_rule(m: int, degree: int) -> tuple[np.ndarray, np.ndarray]:
    points, weights = stroud_rule(m, degree)
    return points, weights * measure_factor(m)


def _power_integral(values: np.ndarray, weights: np.ndarray, p: float) -> float:
    if math.isinf(p):
        return float(values.max(initial=0.0))
    return float(np.dot(weights, values**p))


def cylinder_norm_report(omega: PolyForm, p: float = 2.0, degree: int = 12) -> dict[str, Any]:
    """Measured norms of the cylinder extension over (unit-edge simplex) x [0, 1].

    The L_p factor is ``1 / (p + 1)`` exactly; the Sobolev norm grows by at
    most ``(2^(p-1) + 1)^(1/p)`` because ``d`` of the extension carries the
    term ``-ds ^ omega``.

    Returns:
        dict: p-th powers of the input and output norms, the measured and
            exact L_p factors, the Sobolev ratio and its bound
    """
    p = _check_p(p)
    if math.isinf(p):
        raise ValueError("Cylinder factors are stated for finite p")
    logger.warning(
        f"The cylinder factor is printed as 1/(1+p)^p; the integral is 1/(1+p) = {1 / (1 + p):.6g}"
    )
    m = omega.dim
    extended = extend_cylinder(omega)
    base_points, base_weights = _base_rule(m, degree)
    s_nodes, s_weights = gauss_legendre(degree // 2 + int(math.ceil(p)) + 2, 0.0, 1.0)
    grid = np.concatenate(
        [np.repeat(base_points, len(s_nodes), axis=0), np.tile(s_nodes, len(base_points))[:, None]],
        axis=1,
    )
    weights = np.repeat(base_weights, len(s_nodes)) * np.tile(s_weights, len(base_points))

    def power(form: PolyForm, points: np.ndarray, w: np.ndarray) -> float:
        return _power_integral(pointwise_norm(form.evaluate(points)), w, p)

    base_lp = power(omega, base_points, base_weights)
    base_d = power(exterior_d(omega), base_points, base_weights) if omega.degree < m else 0.0
    ext_lp = power(extended, grid, weights)
    ext_d = power(exterior_d(extended), grid, weights)

    factor = ext_lp / base_lp if base_lp > 0 else 1.0 / (p + 1)
    sobolev_in = base_lp + base_d
    sobolev_out = ext_lp + ext_d
    ratio = (sobolev_out / sobolev_in) ** (1 / p) if sobolev_in > 0 else 0.0
    bound = (2 ** (p - 1) + 1) ** (1 / p)
    return {
        "p": p,
        "input_lp_power": base_lp,
        "output_lp_power": ext_lp,
        "lp_factor": factor,
        "exact_lp_factor": 1.0 / (p + 1),
        "sobolev_ratio": ratio,
        "sobolev_bound": bound,
        "holds": bool(abs(factor - 1 / (p + 1)) <= 1e-10 and ratio <= bound + 1e-12),
    }
