from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from typing import TYPE_CHECKING, Any

import numpy as np
import sympy as sp

from derham_lab._complex import SimplicialComplex, boundary_faces, edge_key
from derham_lab._errors import ComplexError, DegreeError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from derham_lab._complex import Simplex

logger = logging.getLogger(__name__)


class Cochain:
    """A real k-cochain on a finite complex.

    Values are kept as sympy numbers in the order of ``complex.simplices[k]``,
    so integer and rational cochains stay exact through the coboundary and the
    Whitney map.

    Args:
        complex (SimplicialComplex): the complex
        degree (int): cochain degree k
        values (Mapping[Simplex, number] | Sequence[number], optional): value
            per oriented k-simplex, or a list in ``complex.simplices[k]``
            order. Missing simplices are zero.
        p (float): exponent of the l_p norm, defaults to 2
    """

    def __init__(
        self,
        complex: SimplicialComplex,
        degree: int,
        values: Mapping[Simplex, Any] | Sequence[Any] | None = None,
        p: float = 2.0,
    ):
        if degree < 0 or degree > complex.dim:
            raise DegreeError(f"Cochain degree {degree} out of range 0..{complex.dim}")
        self.complex = complex
        self.degree = degree
        self.p = float(p)
        simplices = complex.simplices[degree]
        self.values: list[sp.Expr] = [sp.Integer(0)] * len(simplices)
        if values is None:
            return
        if isinstance(values, Mapping):
            for simplex, value in values.items():
                simplex = tuple(simplex)
                if len(simplex) != degree + 1:
                    raise DegreeError(f"Simplex {simplex} in a {degree}-cochain")
                self.values[complex.index(simplex)] = sp.sympify(value)
        else:
            values = list(values)
            if len(values) != len(simplices):
                raise ComplexError(
                    f"Expected {len(simplices)} values for a {degree}-cochain, got {len(values)}"
                )
            self.values = [sp.sympify(v) for v in values]

    @classmethod
    def zero(cls, complex: SimplicialComplex, degree: int, p: float = 2.0) -> Cochain:
        return cls(complex, degree, p=p)

    @classmethod
    def indicator(cls, complex: SimplicialComplex, simplex: Sequence[int], p: float = 2.0):
        """The basis cochain ``chi_sigma``."""
        simplex = complex.check_simplex(simplex)
        return cls(complex, len(simplex) - 1, {simplex: 1}, p=p)

    @classmethod
    def from_array(cls, complex: SimplicialComplex, degree: int, array: Any, p: float = 2.0):
        return cls(complex, degree, [float(a) for a in np.asarray(array).ravel()], p=p)

    @property
    def simplices(self) -> tuple[Simplex, ...]:
        return self.complex.simplices[self.degree]

    def __getitem__(self, simplex: Sequence[int]) -> sp.Expr:
        return self.values[self.complex.index(tuple(simplex))]

    def __iter__(self):
        return iter(zip(self.simplices, self.values))

    def __repr__(self) -> str:
        return f"Cochain(degree={self.degree}, support={len(self.support())})"

    @property
    def array(self) -> np.ndarray:
        return np.array([float(v) for v in self.values], dtype=float)

    def support(self) -> list[Simplex]:
        return [s for s, v in self if v != 0]

    def norm(self, p: float | None = None) -> float:
        p = self.p if p is None else float(p)
        values = np.abs(self.array)
        if math.isinf(p):
            return float(values.max(initial=0.0))
        return float(np.sum(values**p) ** (1.0 / p))

    # algebra

    def _check(self, other: Cochain) -> None:
        if not isinstance(other, Cochain):
            raise TypeError(f"Expected Cochain, got {type(other).__name__}")
        if other.complex != self.complex or other.degree != self.degree:
            raise DegreeError("Cochains live on different complexes or degrees")

    def __add__(self, other: Cochain) -> Cochain:
        self._check(other)
        return Cochain(
            self.complex,
            self.degree,
            [a + b for a, b in zip(self.values, other.values)],
            p=self.p,
        )

    def __neg__(self) -> Cochain:
        return Cochain(self.complex, self.degree, [-v for v in self.values], p=self.p)

    def __sub__(self, other: Cochain) -> Cochain:
        return self + (-other)

    def __mul__(self, scalar: Any) -> Cochain:
        s = sp.sympify(scalar)
        return Cochain(self.complex, self.degree, [s * v for v in self.values], p=self.p)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            other.complex == self.complex
            and other.degree == self.degree
            and all(sp.simplify(a - b) == 0 for a, b in zip(self.values, other.values))
        )

    def __hash__(self) -> int:
        return hash((self.degree, len(self.values)))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def max_abs_difference(self, other: Cochain) -> float:
        self._check(other)
        return float(np.max(np.abs(self.array - other.array), initial=0.0))

    # serialization

    def to_dict(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "p": self.p,
            "values": {edge_key(s): str(v) for s, v in self if v != 0},
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], complex: SimplicialComplex) -> Cochain:
        degree = int(data["degree"])
        values = {}
        for key, value in data.get("values", {}).items():
            simplex = tuple(int(v) for v in str(key).split("-"))
            values[simplex] = sp.sympify(value, rational=isinstance(value, str))
        return cls(complex, degree, values, p=float(data.get("p", 2.0)))


def coboundary_matrix(complex: SimplicialComplex, k: int) -> sp.Matrix:
    """Matrix of the coboundary C^k -> C^(k+1) with integer entries.

    Rows follow ``complex.simplices[k + 1]`` and columns
    ``complex.simplices[k]``; at the top degree the matrix has no rows.
    """
    if k < 0 or k > complex.dim:
        raise DegreeError(f"Degree {k} out of range 0..{complex.dim}")
    columns = len(complex.simplices[k])
    if k == complex.dim:
        return sp.zeros(0, columns)
    rows = complex.simplices[k + 1]
    matrix = sp.zeros(len(rows), columns)
    for r, tau in enumerate(rows):
        for sign, face in boundary_faces(tau):
            matrix[r, complex.index(face)] += sign
    return matrix


def coboundary(c: Cochain) -> Cochain:
    """``(dc)(tau) = sum_i (-1)^i c(tau without its i-th vertex)``.

    Raises:
        DegreeError: at the top degree of the complex
    """
    K, k = c.complex, c.degree
    if k >= K.dim:
        raise DegreeError(f"No {k + 1}-simplices to carry the coboundary of a {k}-cochain")
    values = []
    for tau in K.simplices[k + 1]:
        values.append(sum((sign * c[face] for sign, face in boundary_faces(tau)), sp.Integer(0)))
    return Cochain(K, k + 1, values, p=c.p)
