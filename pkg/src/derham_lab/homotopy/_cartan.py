from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Any

import sympy as sp
from tqdm import tqdm

from derham_lab._errors import DegreeError, NotClosedError
from derham_lab._random import make_rng, random_polyform, random_vector
from derham_lab.forms._poly import (
    AffineMap,
    PolyForm,
    VectorFieldPoly,
    coordinates,
    exterior_d,
    integrate_parameter,
    interior_product,
    lie_derivative,
    pullback,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

TIME = sp.Symbol("t")


def cartan_Q(v: Sequence[Any], omega: PolyForm) -> PolyForm:
    """``Q_v w = int_0^1 i_v (s*_(tv) w) dt`` for a constant vector ``v``.

    On 0-forms Q is the zero map into degree -1.
    """
    if omega.degree == 0:
        return PolyForm.zero(omega.dim, -1)
    X = VectorFieldPoly.constant(list(v))
    shifted = pullback(AffineMap.translation([TIME * c for c in X.components]), omega)
    return integrate_parameter(interior_product(X, shifted), TIME)


def verify_cartan_identity(v: Sequence[Any], omega: PolyForm) -> PolyForm:
    """``s*_v w - w - Q_v dw - d Q_v w``, identically zero."""
    residual = pullback(AffineMap.translation(list(v)), omega) - omega
    d_omega = exterior_d(omega)
    if omega.degree < omega.dim:
        residual = residual - cartan_Q(v, d_omega)
    if omega.degree > 0:
        residual = residual - exterior_d(cartan_Q(v, omega))
    return residual


def lie_d_commutator(X: VectorFieldPoly, omega: PolyForm) -> PolyForm:
    """``L_X d w - d L_X w``, identically zero."""
    if omega.degree >= omega.dim:
        return PolyForm.zero(omega.dim, omega.degree + 1)
    return lie_derivative(X, exterior_d(omega)) - exterior_d(lie_derivative(X, omega))


def poincare_primitive(omega: PolyForm) -> PolyForm:
    """Primitive of a closed form from the radial homotopy to the origin.

    ``eta = sum_I int_0^1 t^(k-1) c_I(t x) dt . i_x dx_I`` satisfies
    ``d eta = w`` for every closed polynomial k-form with ``k >= 1``.

    Raises:
        DegreeError: on 0-forms
        NotClosedError: if ``dw != 0``
    """
    if omega.degree < 1:
        raise DegreeError("A primitive needs a form of degree at least 1")
    if not exterior_d(omega).is_zero():
        raise NotClosedError(f"Form {omega} is not closed")
    x = coordinates(omega.dim)
    radial = omega.subs({xi: TIME * xi for xi in x}) * TIME ** (omega.degree - 1)
    euler = VectorFieldPoly(omega.dim, list(x))
    return integrate_parameter(interior_product(euler, radial), TIME)


def cartan_suite(
    cases: int = 200,
    seed: int | None = 0,
    max_dim: int = 4,
    max_degree: int = 4,
    max_poly_degree: int = 4,
) -> dict[str, Any]:
    """Randomized exact check of the Cartan homotopy formula.

    Returns:
        dict: ``cases``, ``failures`` and, when something fails, the first
            ``counterexample`` as serialized forms
    """
    rng = make_rng(seed)
    failures = 0
    counterexample = None
    for _ in tqdm(range(cases), desc="Cartan identity"):
        dim = int(rng.integers(1, max_dim + 1))
        degree = int(rng.integers(0, min(dim, max_degree) + 1))
        omega = random_polyform(rng, dim, degree, max_poly_degree)
        v = random_vector(rng, dim)
        residual = verify_cartan_identity(v, omega)
        if not residual.is_zero():
            failures += 1
            if counterexample is None:
                counterexample = {
                    "form": omega.to_dict(),
                    "vector": [str(c) for c in v],
                    "residual": residual.to_dict(),
                }
    if failures:
        logger.warning(f"Cartan identity failed on {failures} of {cases} cases")
    report: dict[str, Any] = {"cases": cases, "seed": seed, "failures": failures}
    if counterexample is not None:
        report["counterexample"] = counterexample
    return report
