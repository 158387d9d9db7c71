from __future__ import annotations

import logging
import math

import numpy as np

from derham_lab._complex import SimplicialComplex
from derham_lab.checks._base import Check
from derham_lab.cohomology._derham_check import derham_iso_check
from derham_lab.cohomology._exactness import witness_suite
from derham_lab.loaders._reference import reference_complex
from derham_lab.whitney._cochain import Cochain
from derham_lab.whitney._derham import derham_map
from derham_lab.whitney._whitney import whitney, whitney_is_chain_map_check

logger = logging.getLogger(__name__)

DEFAULT_BETTI = {"circle": (1, 1), "sphere": (1, 0, 1), "torus7": (1, 2, 1)}


class WhitneySplitCheck(Check):
    """``I W(chi_sigma) = (sqrt(k + 1) / sqrt(2^k)) chi_sigma`` on unit-edge simplices."""

    def __init__(self, degrees: tuple[int, ...] = (0, 1, 2, 3), tol: float = 1e-12):
        self.degrees = tuple(degrees)
        self.tol = tol

    def _compute(self) -> dict:
        cases = []
        for k in self.degrees:
            sigma = tuple(range(k + 1))
            K = SimplicialComplex([sigma])
            value = derham_map(whitney(Cochain.indicator(K, sigma)))[sigma]
            expected = math.sqrt(k + 1) / math.sqrt(2**k)
            error = abs(float(value) - expected)
            cases.append(
                {"degree": k, "value": float(value), "expected": expected, "error": error}
            )
        return {"cases": cases, "passed": all(c["error"] <= self.tol for c in cases)}


class ChainMapCheck(Check):
    """``d W = W d`` on every cochain basis element of the named complexes."""

    def __init__(self, complexes: tuple[str, ...] = ("circle", "sphere", "torus7")):
        self.complexes = tuple(complexes)

    def _compute(self) -> dict:
        checked, failures = 0, []
        for name in self.complexes:
            K = reference_complex(name)
            for k in range(K.dim):
                for sigma in K.simplices[k]:
                    checked += 1
                    if not whitney_is_chain_map_check(Cochain.indicator(K, sigma)).is_zero():
                        failures.append({"complex": name, "simplex": list(sigma)})
        report = {"checked": checked, "failures": len(failures), "passed": not failures}
        if failures:
            report["counterexample"] = failures[0]
        return report


class DeRhamCheck(Check):
    """Betti numbers from cochains and from Whitney forms agree with known values.

    Args:
        expected (dict): reference complex name to Betti numbers
        p (float): exponent of the norms
        check_regularization (bool): also run the regularization leg where
            the complex allows it
    """

    def __init__(
        self,
        expected: dict[str, tuple[int, ...]] | None = None,
        p: float = 2.0,
        check_regularization: bool = False,
    ):
        self.expected = {k: list(v) for k, v in (expected or DEFAULT_BETTI).items()}
        self.p = p
        self.check_regularization = check_regularization

    def _compute(self) -> dict:
        complexes = {}
        for name, betti in self.expected.items():
            report = derham_iso_check(
                reference_complex(name), self.p, check_regularization=self.check_regularization
            )
            report["expected_betti"] = betti
            report["passed"] = report["holds"] and report["betti"] == betti
            complexes[name] = report
        return {
            "complexes": complexes,
            "passed": all(report["passed"] for report in complexes.values()),
        }


class ExactnessWitnessCheck(Check):
    """``||d eta - w||_2 <= tol`` for primitives of seeded random exact forms."""

    def __init__(
        self, complex: str = "circle", degree: int = 1, cases: int = 20, seed: int = 0, tol=1e-8
    ):
        self.complex = complex
        self.degree = degree
        self.cases = cases
        self.seed = seed
        self.tol = tol

    def _compute(self) -> dict:
        K = reference_complex(self.complex)
        residuals = witness_suite(K, self.degree, self.cases, self.seed)
        worst = float(np.max(residuals, initial=0.0))
        return {
            "cases": self.cases,
            "max_residual": worst,
            "passed": worst <= self.tol,
        }
