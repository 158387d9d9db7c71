from __future__ import annotations

import functools
import logging
import math

import numpy as np
import sympy as sp
from scipy.special import roots_jacobi

from derham_lab._errors import QuadratureError
from derham_lab.forms._poly import coordinates

logger = logging.getLogger(__name__)


def simplex_volume(k: int) -> float:
    """Volume of the regular k-simplex with unit edges."""
    return math.sqrt(k + 1) / (math.factorial(k) * 2 ** (k / 2))


def measure_factor(k: int) -> float:
    """Ratio between the unit-edge measure and the reference simplex measure.

    Integrals over a unit-edge k-simplex in chart coordinates are
    ``measure_factor(k) * integral over {x >= 0, sum(x) <= 1}``.
    """
    return math.factorial(k) * simplex_volume(k)


def exact_measure_factor(k: int) -> sp.Expr:
    return sp.sqrt(k + 1) / sp.sqrt(2**k)


def _jacobi_on_unit_interval(n_points: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule on [0, 1] for the weight (1 - s)**alpha."""
    x, w = roots_jacobi(n_points, alpha, 0.0)
    s = (1.0 + x) / 2.0
    return s, w / 2.0 ** (alpha + 1)


@functools.lru_cache(maxsize=64)
def stroud_rule(dim: int, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Collapsed Gauss-Jacobi rule on the reference simplex.

    The rule integrates polynomials of total degree ``degree`` exactly over
    ``{x_i >= 0, sum(x) <= 1}``; weights sum to ``1 / dim!``.

    Args:
        dim (int): simplex dimension
        degree (int): polynomial degree to integrate exactly

    Returns:
        tuple[np.ndarray, np.ndarray]: points (N, dim) and weights (N,)
    """
    if dim < 0 or degree < 0:
        raise QuadratureError(f"No rule for dim {dim} and degree {degree}")
    if dim == 0:
        points, weights = np.zeros((1, 0)), np.ones(1)
    else:
        n_points = degree // 2 + 1
        rules = [_jacobi_on_unit_interval(n_points, dim - 1 - i) for i in range(dim)]
        grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
        wgrids = np.meshgrid(*[r[1] for r in rules], indexing="ij")
        s = np.stack([g.ravel() for g in grids], axis=1)
        weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
        points = np.empty_like(s)
        remaining = np.ones(s.shape[0])
        for i in range(dim):
            points[:, i] = s[:, i] * remaining
            remaining = remaining * (1.0 - s[:, i])
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


def reference_integral(expr: sp.Expr, dim: int) -> sp.Expr:
    """Exact integral of a polynomial in ``x1..x_dim`` over the reference simplex.

    Uses the Dirichlet formula for monomials,
    ``prod(a_i!) / (|a| + dim)!``. Non-coordinate symbols are carried along.
    """
    expr = sp.expand(sp.sympify(expr))
    if dim == 0:
        return expr
    coords = coordinates(dim)
    total = sp.Integer(0)
    for powers, coeff in sp.Poly(expr, *coords).terms():
        num = sp.prod([sp.factorial(a) for a in powers])
        total += coeff * num / sp.factorial(sum(powers) + dim)
    return sp.expand(total)


def gauss_legendre(n_points: int, lower: float = -1.0, upper: float = 1.0):
    """Gauss-Legendre nodes and weights on [lower, upper]."""
    x, w = np.polynomial.legendre.leggauss(n_points)
    half = (upper - lower) / 2.0
    return lower + half * (x + 1.0), half * w


def tensor_rule(n: int, nodes: np.ndarray, weights: np.ndarray):
    """n-fold tensor product of a 1-dim rule."""
    if n == 0:
        return np.zeros((1, 0)), np.ones(1)
    grids = np.meshgrid(*([nodes] * n), indexing="ij")
    wgrids = np.meshgrid(*([weights] * n), indexing="ij")
    points = np.stack([g.ravel() for g in grids], axis=1)
    w = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
    return points, w


def box_rule(n: int, half_width: float, degree: int):
    """Tensor Gauss rule on the cube [-half_width, half_width]^n."""
    nodes, weights = gauss_legendre(degree // 2 + 1, -half_width, half_width)
    return tensor_rule(n, nodes, weights)


@functools.lru_cache(maxsize=32)
def ball_rule(n: int, degree: int, radius: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Product rule on the n-ball of given radius for n <= 3.

    Radial Gauss-Jacobi nodes carry the r**(n-1) weight; angles use the
    trapezoid rule in the azimuth (exact for trigonometric polynomials) and
    Gauss-Legendre in the polar cosine.
    """
    n_radial = degree // 2 + 2
    if n == 1:
        points, weights = gauss_legendre(n_radial, -radius, radius)
        return points[:, None], weights
    if n not in (2, 3):
        raise QuadratureError(f"Ball rules are available for n <= 3, got n={n}")
    x, w = roots_jacobi(n_radial, 0.0, n - 1.0)
    r = radius * (1.0 + x) / 2.0
    w_r = w * (radius / 2.0) ** n
    n_phi = degree + 2
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    w_phi = np.full(n_phi, 2 * np.pi / n_phi)
    if n == 2:
        R, PHI = np.meshgrid(r, phi, indexing="ij")
        points = np.stack([(R * np.cos(PHI)).ravel(), (R * np.sin(PHI)).ravel()], axis=1)
        weights = np.outer(w_r, w_phi).ravel()
        return points, weights
    cos_theta, w_theta = gauss_legendre(degree // 2 + 2)
    R, C, PHI = np.meshgrid(r, cos_theta, phi, indexing="ij")
    S = np.sqrt(1.0 - C**2)
    points = np.stack(
        [(R * S * np.cos(PHI)).ravel(), (R * S * np.sin(PHI)).ravel(), (R * C).ravel()], axis=1
    )
    weights = (w_r[:, None, None] * w_theta[None, :, None] * w_phi[None, None, :]).ravel()
    return points, weights
