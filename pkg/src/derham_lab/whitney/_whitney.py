from __future__ import annotations

import functools
import logging
import math
from typing import TYPE_CHECKING

from derham_lab.forms._piecewise import PiecewiseForm, barycentric_form
from derham_lab.forms._poly import PolyForm, exterior_d, wedge
from derham_lab.forms._quadrature import exact_measure_factor
from derham_lab.whitney._cochain import Cochain, coboundary

if TYPE_CHECKING:
    from derham_lab._complex import Simplex

logger = logging.getLogger(__name__)


@functools.lru_cache(maxsize=4096)
def whitney_basis_piece(sigma: Simplex, facet: Simplex) -> PolyForm:
    """``k! sum_i (-1)^i t_i dt_0 ^ .. (omit i) .. ^ dt_k`` in the chart of ``facet``.

    The barycentric coordinates are those of the vertices of ``sigma`` seen
    from ``facet``; the piece is zero when ``sigma`` is not a face of ``facet``.
    """
    m, k = len(facet) - 1, len(sigma) - 1
    if not set(sigma) <= set(facet):
        return PolyForm.zero(m, k)
    t = [barycentric_form(m, facet.index(v)) for v in sigma]
    dt = [exterior_d(ti) for ti in t]
    total = PolyForm.zero(m, k)
    for i in range(k + 1):
        term = t[i]
        for j in range(k + 1):
            if j != i:
                term = wedge(term, dt[j])
        total = total + term * (-1) ** i
    return total * math.factorial(k)


def whitney(c: Cochain) -> PiecewiseForm:
    """The Whitney form of a cochain, ``sum c(sigma) W(chi_sigma)``.

    Args:
        c (Cochain): a k-cochain

    Returns:
        PiecewiseForm: a face compatible k-form, affine on every simplex
    """
    K = c.complex
    pieces: dict[Simplex, PolyForm] = {}
    for sigma, value in c:
        if value == 0:
            continue
        for facet in K.facets_containing(sigma):
            piece = whitney_basis_piece(sigma, facet) * value
            pieces[facet] = pieces[facet] + piece if facet in pieces else piece
    return PiecewiseForm(K, c.degree, pieces)


def whitney_normalized(c: Cochain) -> PiecewiseForm:
    """``(sqrt(2^k) / sqrt(k + 1)) W(c)``, the right inverse of the de Rham map."""
    return whitney(c) * (1 / exact_measure_factor(c.degree))


def whitney_is_chain_map_check(c: Cochain) -> PiecewiseForm:
    """``d W(c) - W(dc)``; zero for every cochain."""
    d_whitney = whitney(c).exterior_d()
    if c.degree >= c.complex.dim:
        return d_whitney
    return d_whitney - whitney(coboundary(c))
