from __future__ import annotations

import logging
import math
from typing import Any

import numpy as np

from derham_lab._errors import DegreeError
from derham_lab.forms._norms import _check_p, lp_norm, sobolev_norm
from derham_lab.forms._piecewise import PiecewiseForm
from derham_lab.forms._quadrature import (
    measure_factor,
    reference_integral,
    simplex_volume,
    stroud_rule,
)
from derham_lab.whitney._cochain import Cochain
from derham_lab.whitney._whitney import whitney, whitney_normalized

logger = logging.getLogger(__name__)


def _check_form(omega: PiecewiseForm, k: int | None) -> int:
    if not isinstance(omega, PiecewiseForm):
        raise TypeError(f"The de Rham map needs a PiecewiseForm, got {type(omega).__name__}")
    if k is not None and k != omega.degree:
        raise DegreeError(f"Requested degree {k} for a {omega.degree}-form")
    return omega.degree


def derham_map(omega: PiecewiseForm, k: int | None = None, quad_degree: int | None = None):
    """Integrate a k-form over every k-simplex.

    The trace on each simplex is integrated with a Stroud rule exact for its
    polynomial degree, in the unit-edge measure.

    Args:
        omega (PiecewiseForm): a face compatible k-form
        k (int, optional): expected degree
        quad_degree (int, optional): rule degree, the trace degree by default

    Returns:
        Cochain: the k-cochain ``sigma -> int_sigma omega``
    """
    k = _check_form(omega, k)
    K = omega.complex
    values = []
    for sigma in K.simplices[k]:
        trace = omega.trace(sigma)
        degree = trace.poly_degree() if quad_degree is None else quad_degree
        points, weights = stroud_rule(k, degree)
        integrand = trace.evaluate(points)[:, 0]
        values.append(float(measure_factor(k) * np.dot(weights, integrand)))
    return Cochain(K, k, values)


def reference_derham_map(omega: PiecewiseForm, k: int | None = None) -> Cochain:
    """Exact integrals over every k-simplex in the reference simplex measure.

    These are the Whitney coordinates: ``reference_derham_map(W(c)) == c``.
    """
    k = _check_form(omega, k)
    K = omega.complex
    values = [
        reference_integral(omega.trace(sigma).coefficient(tuple(range(k))), k)
        for sigma in K.simplices[k]
    ]
    return Cochain(K, k, values)


def whitney_projector(omega: PiecewiseForm, quad_degree: int | None = None) -> PiecewiseForm:
    """``W~(I(omega))``, the projection onto the Whitney forms."""
    return whitney_normalized(derham_map(omega, quad_degree=quad_degree))


def projector_defect(omega: PiecewiseForm) -> float:
    """Entrywise distance between ``I P P omega`` and ``I P omega``."""
    once = whitney_projector(omega)
    twice = whitney_projector(once)
    return derham_map(twice).max_abs_difference(derham_map(once))


def derham_map_bound(omega: PiecewiseForm, p: float = 2.0) -> dict[str, Any]:
    """Hoelder estimate ``||I w||^p <= vol_k^(p-1) sum_sigma int_sigma |w|^p``.

    The right side uses the L_p norm of the traces on the k-skeleton. The
    ratio against the full L_p norm of ``omega`` is reported alongside.
    """
    p = _check_p(p)
    k = omega.degree
    K = omega.complex
    cochain = derham_map(omega)
    skeleton_power = 0.0
    for sigma in K.simplices[k]:
        trace = omega.trace(sigma)
        points, weights = stroud_rule(k, 2 * trace.poly_degree() + 2)
        values = np.abs(trace.evaluate(points)[:, 0])
        if math.isinf(p):
            skeleton_power = max(skeleton_power, float(values.max(initial=0.0)))
        else:
            skeleton_power += measure_factor(k) * float(np.dot(weights, values**p))
    if math.isinf(p):
        lhs, rhs = cochain.norm(p), skeleton_power
    else:
        lhs = cochain.norm(p) ** p
        rhs = simplex_volume(k) ** (p - 1) * skeleton_power
    full = lp_norm(omega, p)
    return {
        "degree": k,
        "p": p,
        "lhs": lhs,
        "rhs": rhs,
        "holds": bool(lhs <= rhs * (1 + 1e-12) + 1e-14),
        "ratio_to_form_norm": cochain.norm(p) / full if full > 0 else 0.0,
    }


def whitney_norm_bound(c: Cochain, p: float = 2.0, quad_degree: int = 8) -> dict[str, Any]:
    """Check ``||W c||^p <= N C binom(n + 1, k + 1)^(p - 1) ||c||^p`` with measured constants.

    ``N`` is the largest number of maximal simplices around a k-simplex and
    ``C`` the largest Sobolev contribution ``int_T |W chi|^p + |d W chi|^p``
    of a single basis form on a single maximal simplex.
    """
    p = _check_p(p)
    if math.isinf(p):
        raise ValueError("The Whitney bound is stated for finite p")
    logger.warning(
        "The Whitney bound is printed without the p-th power of ||c||; "
        "the homogeneous form is checked"
    )
    K, k = c.complex, c.degree
    C = 0.0
    multiplicity = 0
    for sigma in K.simplices[k]:
        facets = K.facets_containing(sigma)
        multiplicity = max(multiplicity, len(facets))
        basis = whitney(Cochain.indicator(K, sigma))
        for facet in facets:
            single = PiecewiseForm(K, k, {facet: basis.piece(facet)})
            C = max(C, sobolev_norm(single, p, quad_degree) ** p)
    binom = math.comb(K.dim + 1, k + 1)
    lhs = sobolev_norm(whitney(c), p, quad_degree) ** p
    rhs = multiplicity * C * binom ** (p - 1) * c.norm(p) ** p
    return {
        "degree": k,
        "p": p,
        "N": multiplicity,
        "star_bound": max(dict(K.graph.degree).values(), default=0),
        "C": C,
        "lhs": lhs,
        "rhs": rhs,
        "holds": bool(lhs <= rhs * (1 + 1e-12) + 1e-14),
    }

