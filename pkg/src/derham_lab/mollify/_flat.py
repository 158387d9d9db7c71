from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Any

import sympy as sp
from tqdm import tqdm

from derham_lab._errors import DimensionMismatchError
from derham_lab._random import make_rng, random_polyform
from derham_lab.forms._poly import AffineMap, PolyForm, exterior_d, pullback
from derham_lab.homotopy._cartan import cartan_Q
from derham_lab.mollify._kernel import KernelProfile, make_kernel

if TYPE_CHECKING:
    from derham_lab.mollify._kernel import KernelSpec

logger = logging.getLogger(__name__)


def kernel_symbols(n: int) -> tuple[sp.Symbol, ...]:
    """Integration variables ``v1..vn`` of the kernel."""
    return sp.symbols(f"v1:{n + 1}", real=True)


def _check_dim(omega: PolyForm, kernel: KernelSpec) -> None:
    if omega.dim != kernel.dim:
        raise DimensionMismatchError(f"Kernel on R^{kernel.dim} and form on R^{omega.dim}")


def _average(form: PolyForm, kernel: KernelSpec, v: tuple[sp.Symbol, ...]) -> PolyForm:
    """Integrate every coefficient against ``f(v) dv`` by replacing monomials with moments."""

    def integrate(c: sp.Expr) -> sp.Expr:
        poly = sp.Poly(sp.expand(c), *v)
        return sp.Add(*[coeff * kernel.moment(powers) for powers, coeff in poly.terms()])

    return form.map_coefficients(integrate)


def regularize_flat(omega: PolyForm, kernel: KernelSpec) -> PolyForm:
    """``R_eps w = int s*_(eps v) w f(v) dv`` with translations ``s``.

    Exact for the polynomial profile; the smooth profile enters through
    floating point moments.
    """
    _check_dim(omega, kernel)
    v = kernel_symbols(omega.dim)
    shifted = pullback(AffineMap.translation([kernel.eps * vi for vi in v]), omega)
    return _average(shifted, kernel, v)


def homotopy_flat(omega: PolyForm, kernel: KernelSpec) -> PolyForm:
    """``A_eps w = int Q_(eps v) w f(v) dv``, of degree one less; zero on 0-forms."""
    _check_dim(omega, kernel)
    v = kernel_symbols(omega.dim)
    return _average(cartan_Q([kernel.eps * vi for vi in v], omega), kernel, v)


def flat_homotopy_residual(omega: PolyForm, kernel: KernelSpec) -> PolyForm:
    """``R_eps w - w - d A_eps w - A_eps d w``; zero for the polynomial profile."""
    residual = regularize_flat(omega, kernel) - omega
    if omega.degree < omega.dim:
        residual = residual - homotopy_flat(exterior_d(omega), kernel)
    if omega.degree > 0:
        residual = residual - exterior_d(homotopy_flat(omega, kernel))
    return residual


def mollifier_suite(
    cases: int = 100,
    seed: int | None = 0,
    max_dim: int = 3,
    max_poly_degree: int = 3,
) -> dict[str, Any]:
    """Randomized exact check of ``R_eps - 1 = d A_eps + A_eps d`` with the polynomial kernel."""
    rng = make_rng(seed)
    failures = 0
    counterexample = None
    for _ in tqdm(range(cases), desc="Mollifier homotopy"):
        dim = int(rng.integers(1, max_dim + 1))
        degree = int(rng.integers(0, dim + 1))
        omega = random_polyform(rng, dim, degree, max_poly_degree)
        eps = sp.Rational(int(rng.integers(1, 9)), 8)
        kernel = make_kernel(dim, KernelProfile.POLYNOMIAL, eps)
        residual = flat_homotopy_residual(omega, kernel)
        if not residual.is_zero():
            failures += 1
            if counterexample is None:
                counterexample = {
                    "form": omega.to_dict(),
                    "eps": str(eps),
                    "residual": residual.to_dict(),
                }
    if failures:
        logger.warning(f"Mollifier homotopy failed on {failures} of {cases} cases")
    report: dict[str, Any] = {"cases": cases, "seed": seed, "failures": failures}
    if counterexample is not None:
        report["counterexample"] = counterexample
    return report
