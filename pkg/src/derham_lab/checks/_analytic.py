from __future__ import annotations

import logging
import math

import sympy as sp

from derham_lab.checks._base import Check
from derham_lab.extension._boundary import extend_from_boundary, extension_norm_report
from derham_lab.extension._bouquet import Bouquet, bouquet_norm_report, extend_bouquet
from derham_lab.extension._cylinder import cylinder_norm_report
from derham_lab.extension._skeleton import extend_from_skeleton
from derham_lab.extension._sphere import extend_by_zero_sphere, sphere_extension_report
from derham_lab.forms._poly import PolyForm, coordinates
from derham_lab.loaders._reference import reference_complex
from derham_lab.mollify._global import global_regularize
from derham_lab.mollify._scan import DEFAULT_EPS, operator_norm_scan, scan_trends, sup_bound_check
from derham_lab.whitney._cochain import Cochain
from derham_lab.whitney._whitney import whitney

logger = logging.getLogger(__name__)


class OperatorNormTrendCheck(Check):
    """Empirical ``C(eps)`` and ``M(eps)`` of the flat operators shrink with ``eps``.

    Passes when both are non-increasing, ``C`` at the smallest width is at most
    1.1 and ``M`` has at least halved across the range.
    """

    def __init__(self, eps_values: tuple[float, ...] = DEFAULT_EPS, p: float = 2.0):
        self.eps_values = [float(e) for e in eps_values]
        self.p = p

    def _compute(self) -> dict:
        table = operator_norm_scan(self.eps_values, p=self.p)
        trends = scan_trends(table)
        return {
            "table": table.to_dict(orient="records"),
            "trends": trends,
            "passed": trends["holds"],
        }


class SupBoundCheck(Check):
    """``sup_F |R_eps w| <= mes(supp f_eps)^((p-1)/p) sup f_eps ||w||_p`` on the sample forms."""

    def __init__(self, eps: float = 0.1, p: float = 2.0):
        self.eps = eps
        self.p = p

    def _compute(self) -> dict:
        report = sup_bound_check(eps=self.eps, p=self.p)
        report["passed"] = report["holds"]
        return report


def _cylinder_samples() -> list[PolyForm]:
    x, y = coordinates(2)
    (z,) = coordinates(1)
    return [
        PolyForm.function(1, 1 + z**2),
        PolyForm.basis(1, (0,), 2 - z),
        PolyForm.basis(2, (0,), x * y + 1),
        PolyForm.basis(2, (0, 1), 1 + x - y),
    ]


class ExtensionNormCheck(Check):
    """Norms of the cylinder, bouquet, boundary, skeleton and sphere extensions.

    The cylinder extension must carry exactly ``1 / (p + 1)`` of the L_p
    power and the bouquet model ``2 / (p + 1)``. The boundary, skeleton and
    sphere extensions must not increase the L_p norm. Sobolev ratios are
    reported without gating the result: ``d`` of a collar extension carries
    ``ds ^ w`` and grows with the collar slope.
    """

    def __init__(self, ps: tuple[float, ...] = (1.0, 2.0, 4.0), inner_scale: float = 0.5):
        self.ps = [float(p) for p in ps]
        self.inner_scale = inner_scale

    def _sources(self):
        (z,) = coordinates(1)
        circle = reference_complex("circle")
        boundary_form = whitney(Cochain(circle, 1, [1, -2, sp.Rational(1, 2)]))
        triangle = reference_complex("triangle")
        skeleton_form = whitney(Cochain(triangle.skeleton(1), 0, [1, 2, -1]))
        bouquet = Bouquet(
            (0.0, math.pi / 3),
            (PolyForm.function(1, 1 + z), PolyForm.function(1, z**2 + 1)),
        )
        arc = extend_by_zero_sphere((0.5, 2.0), PolyForm.basis(1, (0,), 1 + z))
        return boundary_form, triangle, skeleton_form, bouquet, arc

    def _compute(self) -> dict:
        boundary_form, triangle, skeleton_form, bouquet, arc = self._sources()
        boundary_ext = extend_from_boundary(boundary_form, inner_scale=self.inner_scale)
        bouquet_ext = extend_bouquet(bouquet)
        per_p = []
        for p in self.ps:
            cylinder = [cylinder_norm_report(form, p) for form in _cylinder_samples()]
            skeleton = extend_from_skeleton(skeleton_form, triangle, self.inner_scale, p)
            entry = {
                "p": p,
                "cylinder": cylinder,
                "bouquet": bouquet_norm_report(bouquet_ext, p),
                "boundary": extension_norm_report(boundary_form, boundary_ext, p),
                "skeleton": skeleton.steps,
                "sphere": sphere_extension_report(arc, p),
            }
            entry["passed"] = bool(
                all(report["holds"] for report in cylinder)
                and entry["bouquet"]["holds"]
                and entry["boundary"]["lp_holds"]
                and all(step["lp_holds"] for step in skeleton.steps)
                and entry["sphere"]["holds"]
            )
            per_p.append(entry)
        return {"exponents": per_p, "passed": all(entry["passed"] for entry in per_p)}


class GlobalRegularizationCheck(Check):
    """``||R w - w - d A w - A d w||_p <= tol`` for Whitney basis forms on a graph.

    Every basis form of every degree of the complex is regularized; the star
    operators must also leave the form unchanged away from their stars.
    """

    def __init__(
        self,
        complex: str = "circle",
        eps: float = 0.1,
        p: float = 2.0,
        quad_degree: int = 20,
        tol: float = 1e-4,
    ):
        self.complex = complex
        self.eps = eps
        self.p = p
        self.quad_degree = quad_degree
        self.tol = tol

    def _compute(self) -> dict:
        K = reference_complex(self.complex)
        cases = []
        for k in range(K.dim + 1):
            for sigma in K.simplices[k]:
                omega = whitney(Cochain.indicator(K, sigma))
                result = global_regularize(omega, self.eps, p=self.p, quad_degree=self.quad_degree)
                cases.append(
                    {
                        "simplex": list(sigma),
                        "residual": result.residual,
                        "eps_schedule": {str(v): e for v, e in result.eps_schedule.items()},
                        "locality": result.locality,
                        "passed": bool(
                            result.residual <= self.tol and result.locality.get("holds", True)
                        ),
                    }
                )
        report = {
            "cases": cases,
            "max_residual": max(case["residual"] for case in cases),
            "passed": all(case["passed"] for case in cases),
        }
        failing = [case for case in cases if not case["passed"]]
        if failing:
            report["counterexample"] = failing[0]
        return report
