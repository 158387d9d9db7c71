from __future__ import annotations

import logging

import sympy as sp

from derham_lab.checks._base import Check
from derham_lab.forms._poly import PolyForm, coordinates
from derham_lab.homotopy._cartan import cartan_suite
from derham_lab.mollify._flat import mollifier_suite, regularize_flat
from derham_lab.mollify._kernel import KernelProfile, make_kernel

logger = logging.getLogger(__name__)


class CartanIdentityCheck(Check):
    """``s*_v w - w = Q_v dw + d Q_v w`` as an exact identity on random polynomial forms.

    Args:
        cases (int): number of random forms
        seed (int): seed of the generator
        max_dim (int): largest ambient dimension
        max_degree (int): largest form degree
        max_poly_degree (int): largest coefficient degree
    """

    def __init__(
        self,
        cases: int = 200,
        seed: int = 0,
        max_dim: int = 4,
        max_degree: int = 4,
        max_poly_degree: int = 4,
    ):
        self.cases = cases
        self.seed = seed
        self.max_dim = max_dim
        self.max_degree = max_degree
        self.max_poly_degree = max_poly_degree

    def _compute(self) -> dict:
        report = cartan_suite(
            self.cases, self.seed, self.max_dim, self.max_degree, self.max_poly_degree
        )
        report["passed"] = report["failures"] == 0
        return report


class MollifierHomotopyCheck(Check):
    """``R_eps w - w = d A_eps w + A_eps d w`` exactly for the polynomial kernel."""

    def __init__(self, cases: int = 100, seed: int = 0, max_dim: int = 3, max_poly_degree: int = 3):
        self.cases = cases
        self.seed = seed
        self.max_dim = max_dim
        self.max_poly_degree = max_poly_degree

    def _compute(self) -> dict:
        report = mollifier_suite(self.cases, self.seed, self.max_dim, self.max_poly_degree)
        report["passed"] = report["failures"] == 0
        return report


class KernelMomentCheck(Check):
    """Regression value ``R_eps(x^2 dx) - x^2 dx = (eps^2 / 7) dx`` on the line.

    The factor ``1/7`` is the second moment of the normalized profile
    ``(1 - v^2)^2`` on [-1, 1].
    """

    def __init__(self, eps: str = "1/10"):
        self.eps = str(eps)

    def _compute(self) -> dict:
        eps = sp.Rational(self.eps)
        kernel = make_kernel(1, KernelProfile.POLYNOMIAL, eps)
        (x,) = coordinates(1)
        omega = PolyForm.basis(1, (0,), x**2)
        difference = regularize_flat(omega, kernel) - omega
        expected = PolyForm.basis(1, (0,), eps**2 / 7)
        return {
            "eps": str(eps),
            "difference": str(difference),
            "expected": str(expected),
            "second_moment": str(kernel.moment((2,))),
            "passed": difference == expected,
        }
