"""Seeded generators of exact random test data."""

from __future__ import annotations

import itertools
from typing import TYPE_CHECKING

import numpy as np
import sympy as sp

from derham_lab.forms._poly import PolyForm, basis_indices, coordinates

if TYPE_CHECKING:
    from collections.abc import Sequence


def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(0 if seed is None else seed)


def random_rational(rng: np.random.Generator, max_num: int = 5, max_den: int = 4) -> sp.Rational:
    num = int(rng.integers(-max_num, max_num + 1))
    den = int(rng.integers(1, max_den + 1))
    return sp.Rational(num, den)


def random_vector(rng: np.random.Generator, n: int, **kwargs) -> list[sp.Rational]:
    return [random_rational(rng, **kwargs) for _ in range(n)]


def monomials(n: int, max_degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree at most ``max_degree``."""
    return [
        powers
        for powers in itertools.product(range(max_degree + 1), repeat=n)
        if sum(powers) <= max_degree
    ]


def random_polynomial(
    rng: np.random.Generator, n: int, max_degree: int, n_terms: int = 3
) -> sp.Expr:
    x = coordinates(n)
    pool = monomials(n, max_degree)
    picks = rng.choice(len(pool), size=min(n_terms, len(pool)), replace=False)
    expr = sp.Integer(0)
    for i in picks:
        expr += random_rational(rng) * sp.prod([xi**a for xi, a in zip(x, pool[i])])
    return expr


def random_polyform(
    rng: np.random.Generator,
    dim: int,
    degree: int,
    max_poly_degree: int = 3,
    n_components: int | None = None,
) -> PolyForm:
    """A random polynomial form with small rational coefficients."""
    indices: Sequence[tuple[int, ...]] = basis_indices(dim, degree)
    if n_components is not None and indices:
        picks = rng.choice(len(indices), size=min(n_components, len(indices)), replace=False)
        indices = [indices[i] for i in sorted(picks)]
    return PolyForm(
        dim,
        degree,
        {I: random_polynomial(rng, dim, max_poly_degree) for I in indices},
    )
