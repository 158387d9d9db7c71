from __future__ import annotations

import enum
import functools
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np
import sympy as sp
from scipy import integrate, special

from derham_lab.forms._quadrature import ball_rule, gauss_legendre, tensor_rule

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

POLY_NORMALIZER = sp.Rational(15, 16)


@enum.unique
class KernelProfile(str, enum.Enum):
    """Shapes of the averaging kernel."""

    # prod (15/16)(1 - v_i^2)^2 on the cube [-1, 1]^n
    POLYNOMIAL = "polynomial"
    # exp(-1 / (1 - |v|^2)) on the unit ball, normalized
    SMOOTH = "smooth"


def _poly_moment_1d(a: int) -> sp.Rational:
    """``int |v|^a (15/16)(1 - v^2)^2 dv`` over [-1, 1]."""
    return 2 * POLY_NORMALIZER * (
        sp.Rational(1, a + 1) - sp.Rational(2, a + 3) + sp.Rational(1, a + 5)
    )


def _smooth_profile(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = r < 1
    out[inside] = np.exp(-1.0 / (1.0 - r[inside] ** 2))
    return out


@functools.lru_cache(maxsize=64)
def _radial_integral(power: int) -> float:
    """``int_0^1 r^power exp(-1 / (1 - r^2)) dr``."""
    value, _ = integrate.quad(
        lambda r: r**power * math.exp(-1.0 / (1.0 - r * r)) if r < 1 else 0.0,
        0.0,
        1.0,
        epsabs=1e-14,
        epsrel=1e-12,
        limit=200,
    )
    return value


def _sphere_moment(powers: Sequence[int]) -> float:
    """``int_(S^(n-1)) theta^a`` over the unit sphere."""
    if any(a % 2 for a in powers):
        return 0.0
    n = len(powers)
    numerator = 2.0 * math.prod(special.gamma((a + 1) / 2) for a in powers)
    return numerator / special.gamma((sum(powers) + n) / 2)


def ball_volume(n: int, radius: float = 1.0) -> float:
    return math.pi ** (n / 2) / special.gamma(n / 2 + 1) * radius**n


@dataclass(frozen=True)
class KernelSpec:
    """A normalized, even, nonnegative kernel of width ``eps`` on R^n.

    The unit kernel ``f`` is supported in the unit cube (polynomial profile)
    or the unit ball (smooth profile); the scaled kernel is
    ``f_eps(w) = eps^(-n) f(w / eps)``. All moments are of the unit kernel.

    Attributes:
        dim (int): n
        profile (KernelProfile): shape of ``f``
        eps (sp.Rational): width, positive
    """

    dim: int
    profile: KernelProfile
    eps: sp.Rational

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"Kernel dimension must be positive, got {self.dim}")
        if self.eps <= 0:
            raise ValueError(f"Kernel width eps must be positive, got {self.eps}")

    @functools.cached_property
    def normalization(self) -> Any:
        """Constant in front of the profile so that ``int f = 1``."""
        if self.profile is KernelProfile.POLYNOMIAL:
            return POLY_NORMALIZER**self.dim
        mass = _sphere_moment((0,) * self.dim) * _radial_integral(self.dim - 1)
        return 1.0 / mass

    @property
    def exact(self) -> bool:
        return self.profile is KernelProfile.POLYNOMIAL

    def density(self, v: np.ndarray) -> np.ndarray:
        """Unit kernel ``f`` at (N, n) points."""
        v = np.asarray(v, dtype=float).reshape(-1, self.dim)
        if self.profile is KernelProfile.POLYNOMIAL:
            inside = np.all(np.abs(v) <= 1, axis=1)
            values = np.prod(np.clip(1 - v**2, 0.0, None) ** 2, axis=1)
            return float(self.normalization) * values * inside
        return float(self.normalization) * _smooth_profile(np.linalg.norm(v, axis=1))

    def scaled_density(self, w: np.ndarray) -> np.ndarray:
        eps = float(self.eps)
        return self.density(np.asarray(w, dtype=float) / eps) / eps**self.dim

    def moment(self, powers: Sequence[int]) -> Any:
        """``int v^a f(v) dv``; exact rational for the polynomial profile."""
        powers = tuple(int(a) for a in powers)
        if len(powers) != self.dim:
            raise ValueError(f"Expected {self.dim} exponents, got {powers}")
        if any(a % 2 for a in powers):
            return sp.Integer(0) if self.exact else 0.0
        if self.exact:
            return sp.prod([_poly_moment_1d(a) for a in powers])
        return (
            self.normalization
            * _sphere_moment(powers)
            * _radial_integral(sum(powers) + self.dim - 1)
        )

    def abs_moment(self, order: int = 1) -> Any:
        """``int |v|^order f(v) dv`` for a kernel on the line."""
        if self.dim != 1:
            raise ValueError("Absolute moments are provided for n = 1")
        if self.exact:
            return _poly_moment_1d(order)
        return self.normalization * 2.0 * _radial_integral(order)

    @property
    def sup(self) -> float:
        """``sup f = f(0)`` of the unit kernel."""
        return float(self.density(np.zeros((1, self.dim)))[0])

    @property
    def scaled_sup(self) -> float:
        return self.sup / float(self.eps) ** self.dim

    @property
    def support_measure(self) -> float:
        """Lebesgue measure of the support of the scaled kernel."""
        eps = float(self.eps)
        if self.profile is KernelProfile.POLYNOMIAL:
            return (2 * eps) ** self.dim
        return ball_volume(self.dim, eps)

    @property
    def reach(self) -> float:
        """Largest displacement ``|eps v|`` over the support."""
        eps = float(self.eps)
        if self.profile is KernelProfile.POLYNOMIAL:
            return eps * math.sqrt(self.dim)
        return eps

    def exact_degree(self, degree: int = 10) -> int | None:
        """Largest degree of a polynomial in ``v`` that ``nodes(degree)`` integrates exactly.

        ``None`` for the smooth profile, whose density is not polynomial.
        """
        if self.profile is not KernelProfile.POLYNOMIAL:
            return None
        # Gauss rule with n points on each half axis against a quartic density
        return 2 * (degree // 2 + 3) - 1 - 4

    def nodes(self, degree: int = 10) -> tuple[np.ndarray, np.ndarray]:
        """Points ``v`` of the unit support and weights ``w_j f(v_j)`` summing to 1.

        The polynomial profile uses Gauss nodes on both halves of every axis,
        so integrands with a kink on a coordinate plane through 0 stay exact.
        """
        if self.profile is KernelProfile.POLYNOMIAL:
            left, w_left = gauss_legendre(degree // 2 + 3, -1.0, 0.0)
            right, w_right = gauss_legendre(degree // 2 + 3, 0.0, 1.0)
            points, weights = tensor_rule(
                self.dim, np.concatenate([left, right]), np.concatenate([w_left, w_right])
            )
        else:
            points, weights = ball_rule(self.dim, degree)
        weights = weights * self.density(points)
        keep = weights > 0
        points, weights = points[keep], weights[keep]
        return points, weights / weights.sum()


def make_kernel(
    n: int, profile: KernelProfile | str = KernelProfile.POLYNOMIAL, eps: Any = sp.Rational(1, 10)
) -> KernelSpec:
    """A normalized averaging kernel on R^n of width ``eps``.

    Args:
        n (int): dimension
        profile (KernelProfile | str): ``"polynomial"`` (exact moments) or
            ``"smooth"``
        eps (number): width; floats are converted through their decimal string

    Raises:
        ValueError: if ``eps <= 0`` or the profile is unknown
    """
    profile = KernelProfile(profile)
    eps = sp.nsimplify(eps) if isinstance(eps, sp.Basic) else sp.Rational(str(eps))
    return KernelSpec(n, profile, eps)
