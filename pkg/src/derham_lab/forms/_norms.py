from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING

import numpy as np

from derham_lab.forms._poly import exterior_d
from derham_lab.forms._quadrature import ball_rule, box_rule

if TYPE_CHECKING:
    from derham_lab.forms._fields import ComplexField
    from derham_lab.forms._poly import PolyForm

logger = logging.getLogger(__name__)


def _check_p(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"Norm exponent p must lie in [1, inf], got {p}")
    return p


def pointwise_norm(coeffs: np.ndarray) -> np.ndarray:
    """Euclidean norm of coefficient rows in an orthonormal coframe."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape[-1] == 0:
        return np.zeros(coeffs.shape[:-1])
    return np.linalg.norm(coeffs, axis=-1)


def _reduce(values: np.ndarray, weights: np.ndarray, p: float) -> float:
    if math.isinf(p):
        return float(values.max(initial=0.0))
    return float(np.sum(weights * values**p)) ** (1.0 / p)


def lp_norm(field: ComplexField, p: float = 2.0, quad_degree: int | None = None) -> float:
    """L_p norm of a form on a complex.

    ``(sum_T int_T |w|^p)^(1/p)`` with the unit-edge measure on every maximal
    simplex; for ``p = inf`` the maximum over quadrature nodes.

    Args:
        field (ComplexField): the form, e.g. a PiecewiseForm
        p (float): exponent in [1, inf]
        quad_degree (int, optional): polynomial degree of the rule, defaults
            to the field's ``default_quadrature_degree``

    Returns:
        float: the norm
    """
    p = _check_p(p)
    values, weights = [], []
    for facet, points, w in field.quadrature(quad_degree):
        values.append(pointwise_norm(field.evaluate(facet, points)))
        weights.append(w)
    if not values:
        return 0.0
    return _reduce(np.concatenate(values), np.concatenate(weights), p)


def sobolev_norm(field: ComplexField, p: float = 2.0, quad_degree: int | None = None) -> float:
    """Graph norm ``(||w||_p^p + ||dw||_p^p)^(1/p)``; the larger sup norm for p = inf."""
    p = _check_p(p)
    a = lp_norm(field, p, quad_degree)
    b = lp_norm(field.exterior_d(), p, quad_degree)
    if math.isinf(p):
        return max(a, b)
    return (a**p + b**p) ** (1.0 / p)


def patch_lp_norm(
    form: PolyForm, p: float = 2.0, degree: int = 16, domain: str = "ball", radius: float = 1.0
) -> float:
    """L_p norm of a polynomial form over the ball or cube of given radius in R^n."""
    p = _check_p(p)
    if domain == "ball":
        points, weights = ball_rule(form.dim, degree, radius)
    elif domain == "box":
        points, weights = box_rule(form.dim, radius, degree)
    else:
        raise ValueError(f"Unknown domain {domain!r}, expected 'ball' or 'box'")
    return _reduce(pointwise_norm(form.evaluate(points)), weights, p)


def patch_sobolev_norm(
    form: PolyForm, p: float = 2.0, degree: int = 16, domain: str = "ball", radius: float = 1.0
) -> float:
    p = _check_p(p)
    a = patch_lp_norm(form, p, degree, domain, radius)
    b = patch_lp_norm(exterior_d(form), p, degree, domain, radius)
    if math.isinf(p):
        return max(a, b)
    return (a**p + b**p) ** (1.0 / p)
