from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np
import sympy as sp

from derham_lab._complex import edge_key, simplex_faces
from derham_lab._errors import DegreeError, NotClosedError, NotInKernelError, ResidualError
from derham_lab._random import make_rng, random_rational
from derham_lab.cohomology._rank import solve_exact
from derham_lab.forms._norms import lp_norm
from derham_lab.forms._piecewise import PiecewiseForm, face_embedding
from derham_lab.forms._poly import PolyForm, basis_indices, coordinates, exterior_d, pullback
from derham_lab.whitney._cochain import Cochain
from derham_lab.whitney._derham import reference_derham_map
from derham_lab.whitney._whitney import whitney

if TYPE_CHECKING:
    from derham_lab._complex import Simplex, SimplicialComplex

logger = logging.getLogger(__name__)


@dataclass
class WitnessResult:
    """A primitive of an exact form with its diagnostics.

    Attributes:
        eta (PiecewiseForm): the primitive, a face compatible (k-1)-form
        residual (float): ``||d eta - omega||_p``
        exact (bool): whether ``d eta == omega`` holds exactly
        ratio (float): measured ``||eta||_p / ||omega||_p``
        degrees (dict): ansatz degree used on every simplex
        ranks (dict): (rank, nullity) of the linear system on every simplex
    """

    eta: PiecewiseForm
    residual: float
    exact: bool
    ratio: float
    p: float
    degrees: dict[str, int] = field(default_factory=dict)
    ranks: dict[str, tuple[int, int]] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "eta": self.eta.to_dict(),
            "residual": self.residual,
            "exact": self.exact,
            "ratio": self.ratio,
            "p": self.p,
            "degrees": self.degrees,
            "ranks": {key: list(value) for key, value in self.ranks.items()},
        }


def _monomials(coords: tuple[sp.Symbol, ...], degree: int) -> list[sp.Expr]:
    return [
        sp.prod([x**a for x, a in zip(coords, powers)])
        for powers in itertools.product(range(degree + 1), repeat=len(coords))
        if sum(powers) <= degree
    ]


def _coefficient_equations(expr: sp.Expr, coords: tuple[sp.Symbol, ...]) -> list[sp.Expr]:
    expr = sp.expand(expr)
    if expr == 0:
        return []
    if not coords:
        return [expr]
    return sp.Poly(expr, *coords).coeffs()


def _solve_on_simplex(
    delta: Simplex,
    target: PolyForm,
    face_traces: list[tuple[Simplex, PolyForm]],
    degree: int,
) -> tuple[PolyForm | None, int, int]:
    j, k = len(delta) - 1, target.degree
    coords = coordinates(j)
    monomials = _monomials(coords, degree)
    unknowns: list[sp.Symbol] = []
    terms = {}
    for index in basis_indices(j, k - 1):
        symbols = sp.symbols(f"a_{len(unknowns)}:{len(unknowns) + len(monomials)}")
        unknowns.extend(symbols)
        terms[index] = sum((a * m for a, m in zip(symbols, monomials)), sp.Integer(0))
    eta = PolyForm(j, k - 1, terms)

    equations: list[sp.Expr] = []
    for coeff in (exterior_d(eta) - target).terms.values():
        equations.extend(_coefficient_equations(coeff, coords))
    for face, trace in face_traces:
        mismatch = pullback(face_embedding(face, delta), eta) - trace
        for coeff in mismatch.terms.values():
            equations.extend(_coefficient_equations(coeff, coordinates(len(face) - 1)))

    if not equations:
        return PolyForm.zero(j, k - 1), 0, len(unknowns)
    A, b = sp.linear_eq_to_matrix(equations, unknowns)
    solution, rank = solve_exact(A, b)
    if solution is None:
        return None, rank, len(unknowns) - rank
    values = dict(zip(unknowns, solution))
    return eta.subs(values), rank, len(unknowns) - rank


def exactness_witness(
    omega: PiecewiseForm,
    p: float = 2.0,
    degree: int | None = None,
    degree_cap: int | None = None,
    tol: float = 1e-8,
) -> WitnessResult:
    """Build ``eta`` with ``d eta = omega`` for a closed form with zero integrals.

    The primitive is built skeleton by skeleton. On the k-simplices it has
    zero trace on the boundary; on every higher simplex its traces match the
    pieces already built on the faces. Each step is one exact linear solve
    over polynomial (k-1)-forms of bounded degree, raised up to the cap when
    the system is inconsistent.

    Args:
        omega (PiecewiseForm): closed face compatible k-form, k >= 1
        p (float): exponent of the reported norms
        degree (int, optional): starting ansatz degree, input degree + 2 by
            default
        degree_cap (int, optional): largest ansatz degree, start + 4 by default
        tol (float): accepted residual ``||d eta - omega||_p``

    Raises:
        DegreeError: on 0-forms
        NotClosedError: if ``d omega != 0``
        NotInKernelError: if some k-simplex integral is nonzero
        ResidualError: if the cap is reached without a solution
    """
    k = omega.degree
    K = omega.complex
    if k < 1:
        raise DegreeError("A primitive needs a form of degree at least 1")
    omega.check_compatible()
    if not omega.exterior_d().is_zero():
        raise NotClosedError("The form is not closed")
    integrals = reference_derham_map(omega)
    bad = [s for s, v in integrals if abs(float(v)) > 1e-10]
    if bad:
        raise NotInKernelError(
            f"Integral over {bad[0]} is {integrals[bad[0]]}; {len(bad)} simplices nonzero"
        )

    start = omega.poly_degree() + 2 if degree is None else degree
    cap = start + 4 if degree_cap is None else degree_cap
    primitives: dict[Simplex, PolyForm] = {}
    degrees: dict[str, int] = {}
    ranks: dict[str, tuple[int, int]] = {}
    for j in range(k, K.dim + 1):
        for delta in K.simplices[j]:
            target = omega.trace(delta)
            faces = [
                (face, primitives.get(face, PolyForm.zero(j - 1, k - 1)))
                for face in simplex_faces(delta, j - 1)
            ]
            for D in range(start, cap + 1):
                eta, rank, nullity = _solve_on_simplex(delta, target, faces, D)
                if eta is not None:
                    break
            else:
                raise ResidualError(f"No primitive of degree <= {cap} on the simplex {delta}")
            primitives[delta] = eta
            degrees[edge_key(delta)] = D
            ranks[edge_key(delta)] = (rank, nullity)
            logger.debug(f"Primitive on {delta}: degree {D}, rank {rank}, nullity {nullity}")

    eta_form = PiecewiseForm(
        K, k - 1, {f: primitives[f] for f in K.facets if len(f) - 1 >= k}
    )
    difference = eta_form.exterior_d() - omega
    exact = difference.is_zero()
    residual = 0.0 if exact else lp_norm(difference, p)
    if residual > tol:
        raise ResidualError(f"Residual {residual} above tolerance {tol}")
    omega_norm = lp_norm(omega, p)
    ratio = lp_norm(eta_form, p) / omega_norm if omega_norm > 0 else 0.0
    logger.info(f"Exactness witness on {K.name}: residual {residual}, ratio {ratio:.4g}")
    return WitnessResult(eta_form, residual, exact, ratio, float(p), degrees, ranks)


def random_exact_form(K: SimplicialComplex, k: int, seed: int | None = 0, n_terms: int = 3):
    """A random exact k-form ``d theta`` with vanishing simplex integrals.

    ``theta`` mixes Whitney forms with products of hat functions and Whitney
    forms; its Whitney interpolant is subtracted so that the integrals of
    ``theta`` and hence of ``d theta`` vanish exactly.

    Returns:
        tuple[PiecewiseForm, PiecewiseForm]: ``(omega, theta)``
    """
    if not 1 <= k <= K.dim:
        raise DegreeError(f"Degree {k} out of range 1..{K.dim}")
    rng = make_rng(seed)
    lower = K.simplices[k - 1]
    theta = whitney(Cochain(K, k - 1, [random_rational(rng) for _ in lower]))
    for _ in range(n_terms):
        rho = lower[int(rng.integers(len(lower)))]
        v = K.vertices[int(rng.integers(len(K.vertices)))]
        hat = whitney(Cochain.indicator(K, (v,)))
        theta = theta + hat.wedge(whitney(Cochain.indicator(K, rho))) * random_rational(rng)
    theta = theta - whitney(reference_derham_map(theta))
    omega = theta.exterior_d()
    return omega, theta


def witness_suite(K: SimplicialComplex, k: int, cases: int = 20, seed: int | None = 0):
    """Residuals of the exactness witness on seeded random exact forms."""
    rng = make_rng(seed)
    residuals = []
    for _ in range(cases):
        omega, _ = random_exact_form(K, k, seed=int(rng.integers(2**31)))
        residuals.append(exactness_witness(omega).residual)
    return np.asarray(residuals)
