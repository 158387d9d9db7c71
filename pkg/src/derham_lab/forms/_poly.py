"""Polynomial differential forms on coordinate patches.

Forms are stored as a mapping from strictly increasing index tuples (0-based)
to sympy coefficients in canonical expanded form. Coordinates are the symbols
``x1..xn``; coefficients may also contain free parameters such as a time ``t``
or a scale ``eps``, which the homotopy and mollifier code integrate out.
"""

from __future__ import annotations

import functools
import itertools
import logging
from typing import TYPE_CHECKING, Any

import numpy as np
import sympy as sp

from derham_lab._errors import DegreeError, DimensionMismatchError

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)

Index = tuple[int, ...]


@functools.lru_cache(maxsize=None)
def coordinates(n: int) -> tuple[sp.Symbol, ...]:
    """The coordinate symbols ``x1..xn`` of an n-dimensional patch."""
    return tuple(sp.Symbol(f"x{i + 1}") for i in range(n))


@functools.lru_cache(maxsize=None)
def basis_indices(n: int, k: int) -> tuple[Index, ...]:
    """Increasing k-subsets of range(n), the order used for coefficient arrays."""
    if k < 0 or k > n:
        return ()
    return tuple(itertools.combinations(range(n), k))


def index_label(index: Index) -> str:
    if not index:
        return "1"
    return "^".join(f"dx{i + 1}" for i in index)


def parse_index_label(label: str) -> Index:
    label = label.strip()
    if label in ("", "1"):
        return ()
    parts = [p.strip() for p in label.split("^")]
    if not all(p.startswith("dx") for p in parts):
        raise ValueError(f"Cannot parse basis label {label!r}")
    return tuple(int(p[2:]) - 1 for p in parts)


def _canon(expr: Any) -> sp.Expr:
    return sp.expand(sp.sympify(expr))


def _merge_sign(first: Index, second: Index) -> int:
    """Sign of the permutation sorting ``first + second`` (both increasing)."""
    inversions = sum(1 for i in first for j in second if i > j)
    return -1 if inversions % 2 else 1


class PolyForm:
    """A differential k-form on an open subset of R^n with polynomial coefficients.

    Args:
        dim (int): ambient dimension n
        degree (int): form degree k
        terms (Mapping[Index, expr], optional): coefficient of each basis
            element ``dx_I``; indices are 0-based increasing tuples

    Zero coefficients are pruned. A zero form may carry degree ``n + 1``;
    that is what ``exterior_d`` returns on top degree forms. It may also
    carry degree -1, the target of operators that lower the degree of 0-forms.
    """

    def __init__(self, dim: int, degree: int, terms: Mapping[Index, Any] | None = None):
        if dim < 0 or degree < -1:
            raise DegreeError(f"Invalid dimension {dim} or degree {degree}")
        if degree == -1 and any(_canon(c) != 0 for c in (terms or {}).values()):
            raise DegreeError("Only the zero form has degree -1")
        self.dim = dim
        self.degree = degree
        self.terms: dict[Index, sp.Expr] = {}
        for index, coeff in (terms or {}).items():
            index = tuple(index)
            if len(index) != degree or any(b <= a for a, b in zip(index[:-1], index[1:])):
                raise DegreeError(f"Index {index} is not an increasing {degree}-tuple")
            if index and (index[0] < 0 or index[-1] >= dim):
                raise DimensionMismatchError(f"Index {index} out of range for dim {dim}")
            c = _canon(coeff)
            if c != 0:
                self.terms[index] = c
        if degree > dim and self.terms:
            raise DegreeError(f"Nonzero {degree}-form in dimension {dim}")
        self._compiled: dict[Index, Any] = {}

    # constructors

    @classmethod
    def zero(cls, dim: int, degree: int) -> PolyForm:
        return cls(dim, degree)

    @classmethod
    def function(cls, dim: int, expr: Any) -> PolyForm:
        """A 0-form."""
        return cls(dim, 0, {(): expr})

    @classmethod
    def basis(cls, dim: int, index: Sequence[int], coeff: Any = 1) -> PolyForm:
        """``coeff * dx_I``; ``index`` may be unsorted, the sign is adjusted."""
        index = tuple(index)
        if len(set(index)) != len(index):
            return cls(dim, len(index))
        order = sorted(range(len(index)), key=lambda i: index[i])
        inversions = sum(
            1 for a, b in itertools.combinations(range(len(order)), 2) if order[a] > order[b]
        )
        sign = -1 if inversions % 2 else 1
        return cls(dim, len(index), {tuple(sorted(index)): sign * sp.sympify(coeff)})

    @classmethod
    def from_coefficients(cls, dim: int, degree: int, coefficients: Sequence[Any]) -> PolyForm:
        """Build from coefficients listed in ``basis_indices(dim, degree)`` order."""
        return cls(dim, degree, dict(zip(basis_indices(dim, degree), coefficients)))

    # algebra

    def _check_same(self, other: PolyForm) -> None:
        if not isinstance(other, PolyForm):
            raise TypeError(f"Expected PolyForm, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionMismatchError(f"Dimensions {self.dim} and {other.dim} differ")
        if other.degree != self.degree:
            raise DegreeError(f"Degrees {self.degree} and {other.degree} differ")

    def __add__(self, other: PolyForm) -> PolyForm:
        self._check_same(other)
        terms = dict(self.terms)
        for index, coeff in other.terms.items():
            terms[index] = terms.get(index, 0) + coeff
        return PolyForm(self.dim, self.degree, terms)

    def __neg__(self) -> PolyForm:
        return PolyForm(self.dim, self.degree, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other: PolyForm) -> PolyForm:
        return self + (-other)

    def __mul__(self, scalar: Any) -> PolyForm:
        if isinstance(scalar, PolyForm):
            return wedge(self, scalar)
        s = sp.sympify(scalar)
        return PolyForm(self.dim, self.degree, {i: s * c for i, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        if other.dim != self.dim:
            return False
        if not self.terms and not other.terms:
            return True
        return other.degree == self.degree and (self - other).is_zero()

    def __hash__(self) -> int:
        return hash((self.dim, self.degree, tuple(sorted(self.terms, key=str))))

    def __repr__(self) -> str:
        return f"PolyForm(dim={self.dim}, degree={self.degree}, {self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for index in sorted(self.terms):
            coeff = self.terms[index]
            parts.append(f"({coeff})" if not index else f"({coeff})*{index_label(index)}")
        return " + ".join(parts)

    def is_zero(self) -> bool:
        return all(sp.expand(c) == 0 for c in self.terms.values())

    def coefficient(self, index: Sequence[int]) -> sp.Expr:
        return self.terms.get(tuple(index), sp.Integer(0))

    def coefficients(self) -> list[sp.Expr]:
        """Coefficients in ``basis_indices`` order, zeros included."""
        return [self.coefficient(i) for i in basis_indices(self.dim, self.degree)]

    def subs(self, mapping: Mapping[Any, Any]) -> PolyForm:
        """Substitute symbols in every coefficient (simultaneously)."""
        mapping = {sp.sympify(k): sp.sympify(v) for k, v in mapping.items()}
        return PolyForm(
            self.dim, self.degree, {i: c.xreplace(mapping) for i, c in self.terms.items()}
        )

    def map_coefficients(self, func: Any) -> PolyForm:
        return PolyForm(self.dim, self.degree, {i: func(c) for i, c in self.terms.items()})

    @property
    def parameters(self) -> set[sp.Symbol]:
        """Free symbols that are not coordinates."""
        coords = set(coordinates(self.dim))
        free: set[sp.Symbol] = set()
        for c in self.terms.values():
            free |= c.free_symbols
        return free - coords

    def poly_degree(self) -> int:
        """Total polynomial degree of the coefficients in the coordinates."""
        coords = coordinates(self.dim)
        if not self.terms:
            return 0
        if not coords:
            return 0
        return max(sp.Poly(c, *coords).total_degree() for c in self.terms.values())

    # numerics

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Coefficients at ``points``.

        Args:
            points (np.ndarray): (N, dim) array of coordinates

        Returns:
            np.ndarray: (N, C(dim, degree)) array in ``basis_indices`` order
        """
        points = np.asarray(points, dtype=float)
        points = points.reshape(-1, self.dim) if self.dim else points.reshape(len(points), 0)
        n_pts = points.shape[0]
        indices = basis_indices(self.dim, self.degree)
        out = np.zeros((n_pts, len(indices)))
        if self.parameters:
            raise ValueError(f"Cannot evaluate a form with free parameters {self.parameters}")
        coords = coordinates(self.dim)
        for col, index in enumerate(indices):
            coeff = self.terms.get(index)
            if coeff is None:
                continue
            if index not in self._compiled:
                self._compiled[index] = sp.lambdify(coords, coeff, modules="numpy")
            value = self._compiled[index](*points.T)
            out[:, col] = np.broadcast_to(np.asarray(value, dtype=float), (n_pts,))
        return out

    # serialization

    def to_dict(self) -> dict[str, Any]:
        return {
            "dim": self.dim,
            "degree": self.degree,
            "terms": {index_label(i): str(c) for i, c in sorted(self.terms.items())},
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> PolyForm:
        dim = int(data["dim"])
        local = {str(s): s for s in coordinates(dim)}
        terms = {
            parse_index_label(label): sp.sympify(expr, locals=local, rational=True)
            for label, expr in data.get("terms", {}).items()
        }
        degree = int(data.get("degree", len(next(iter(terms), ()))))
        return cls(dim, degree, terms)


class VectorFieldPoly:
    """A vector field on R^n with polynomial components."""

    def __init__(self, dim: int, components: Sequence[Any]):
        if len(components) != dim:
            raise DimensionMismatchError(
                f"Vector field in dimension {dim} needs {dim} components, got {len(components)}"
            )
        self.dim = dim
        self.components = tuple(_canon(c) for c in components)

    @classmethod
    def constant(cls, vector: Sequence[Any]) -> VectorFieldPoly:
        return cls(len(vector), list(vector))

    @classmethod
    def partial(cls, dim: int, j: int) -> VectorFieldPoly:
        """The coordinate field d/dx_{j+1}."""
        return cls(dim, [1 if i == j else 0 for i in range(dim)])

    @classmethod
    def linear(cls, matrix: Sequence[Sequence[Any]], offset: Sequence[Any] | None = None):
        """The affine field ``x -> A x + b``."""
        A = sp.Matrix(matrix)
        n = A.shape[0]
        b = sp.Matrix(offset if offset is not None else [0] * n)
        x = sp.Matrix(coordinates(n))
        return cls(n, list(A * x + b))

    def __repr__(self) -> str:
        return f"VectorFieldPoly({list(self.components)})"

    def is_affine(self) -> bool:
        coords = coordinates(self.dim)
        return all(sp.Poly(c, *coords).total_degree() <= 1 for c in self.components if c != 0)

    def affine_parts(self) -> tuple[sp.Matrix, sp.Matrix]:
        """``(A, b)`` with X(x) = A x + b; raises if the field is not affine."""
        if not self.is_affine():
            raise DegreeError(f"{self} is not an affine vector field")
        coords = coordinates(self.dim)
        A = sp.Matrix(self.dim, self.dim, lambda i, j: sp.diff(self.components[i], coords[j]))
        b = sp.Matrix([c.xreplace(dict.fromkeys(coords, 0)) for c in self.components])
        return A, b

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.components)


def wedge(omega: PolyForm, theta: PolyForm) -> PolyForm:
    """Exterior product of two forms on the same patch."""
    if omega.dim != theta.dim:
        raise DimensionMismatchError(f"Cannot wedge forms of dims {omega.dim} and {theta.dim}")
    degree = omega.degree + theta.degree
    terms: dict[Index, sp.Expr] = {}
    for I, a in omega.terms.items():
        for J, b in theta.terms.items():
            if set(I) & set(J):
                continue
            K = tuple(sorted(I + J))
            terms[K] = terms.get(K, 0) + _merge_sign(I, J) * a * b
    return PolyForm(omega.dim, degree, terms)


def exterior_d(omega: PolyForm) -> PolyForm:
    """Exterior derivative; the zero (n+1)-form on top degree input."""
    coords = coordinates(omega.dim)
    terms: dict[Index, sp.Expr] = {}
    for I, c in omega.terms.items():
        for j in range(omega.dim):
            if j in I:
                continue
            dc = sp.diff(c, coords[j])
            if dc == 0:
                continue
            K = tuple(sorted((j, *I)))
            sign = -1 if sum(1 for i in I if i < j) % 2 else 1
            terms[K] = terms.get(K, 0) + sign * dc
    return PolyForm(omega.dim, omega.degree + 1, terms)


def _contract(X: VectorFieldPoly, omega: PolyForm) -> PolyForm:
    terms: dict[Index, sp.Expr] = {}
    for I, c in omega.terms.items():
        for pos, i in enumerate(I):
            if X.components[i] == 0:
                continue
            rest = I[:pos] + I[pos + 1 :]
            terms[rest] = terms.get(rest, 0) + (-1) ** pos * X.components[i] * c
    return PolyForm(omega.dim, max(omega.degree - 1, 0), terms)


def interior_product(X: VectorFieldPoly, omega: PolyForm) -> PolyForm:
    """Contraction of ``omega`` with ``X``.

    Raises:
        DegreeError: on 0-forms
        DimensionMismatchError: if the field and form live in different dims
    """
    if X.dim != omega.dim:
        raise DimensionMismatchError(f"Field of dim {X.dim} and form of dim {omega.dim}")
    if omega.degree == 0:
        raise DegreeError("Interior product is not defined on 0-forms")
    return _contract(X, omega)


def lie_derivative(X: VectorFieldPoly, omega: PolyForm) -> PolyForm:
    """Lie derivative through the Cartan formula ``d i_X + i_X d``."""
    if X.dim != omega.dim:
        raise DimensionMismatchError(f"Field of dim {X.dim} and form of dim {omega.dim}")
    result = _contract(X, exterior_d(omega))
    if omega.degree > 0:
        result = result + exterior_d(_contract(X, omega))
    return result


class AffineMap:
    """``x -> M x + b`` from R^m to R^n with exact entries.

    Args:
        matrix: n x m matrix
        offset: length n vector, zero by default
    """

    def __init__(self, matrix: Any, offset: Sequence[Any] | None = None):
        self.matrix = sp.Matrix(matrix)
        n, m = self.matrix.shape
        self.offset = sp.Matrix(offset if offset is not None else [0] * n)
        if self.offset.shape != (n, 1):
            raise DimensionMismatchError(f"Offset of shape {self.offset.shape} for {n}x{m} map")

    @property
    def source_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def target_dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, n: int) -> AffineMap:
        return cls(sp.eye(n))

    @classmethod
    def translation(cls, vector: Sequence[Any]) -> AffineMap:
        return cls(sp.eye(len(vector)), list(vector))

    def __call__(self, point: Sequence[Any]) -> list[sp.Expr]:
        return list(self.matrix * sp.Matrix(point) + self.offset)

    def compose(self, inner: AffineMap) -> AffineMap:
        """``self o inner``."""
        if inner.target_dim != self.source_dim:
            raise DimensionMismatchError(
                f"Cannot compose {inner.source_dim}->{inner.target_dim} with "
                f"{self.source_dim}->{self.target_dim}"
            )
        return AffineMap(self.matrix * inner.matrix, self.matrix * inner.offset + self.offset)

    def __repr__(self) -> str:
        return f"AffineMap({self.matrix.tolist()}, {list(self.offset)})"


def pullback(A: AffineMap, omega: PolyForm) -> PolyForm:
    """Pullback of a form on R^n along an affine map R^m -> R^n."""
    if omega.dim != A.target_dim:
        raise DimensionMismatchError(
            f"Form of dim {omega.dim} cannot be pulled back along a map into R^{A.target_dim}"
        )
    m, k = A.source_dim, omega.degree
    image = A(coordinates(m))
    substitution = dict(zip(coordinates(omega.dim), image))
    terms: dict[Index, sp.Expr] = {}
    for I, c in omega.terms.items():
        c_sub = c.xreplace(substitution)
        for J in basis_indices(m, k):
            minor = A.matrix.extract(list(I), list(J)).det() if k else sp.Integer(1)
            if minor == 0:
                continue
            terms[J] = terms.get(J, 0) + minor * c_sub
    return PolyForm(m, k, terms)


def compound_matrix(J: np.ndarray, k: int) -> np.ndarray:
    """k-th compound matrix of a (stack of) Jacobian(s).

    For a Jacobian ``J = dy/dx`` of shape (..., n, m) this returns the array of
    k x k minors of shape (..., C(n, k), C(m, k)), rows and columns in
    ``basis_indices`` order. Pulling back coefficients is then
    ``compound(J, k).T @ coeffs``.
    """
    J = np.asarray(J, dtype=float)
    n, m = J.shape[-2:]
    rows = basis_indices(n, k)
    cols = basis_indices(m, k)
    batch = J.shape[:-2]
    if k == 0:
        return np.ones((*batch, 1, 1))
    if not rows or not cols:
        return np.zeros((*batch, len(rows), len(cols)))
    r = np.array(rows)
    c = np.array(cols)
    blocks = J[..., r[:, None, :, None], c[None, :, None, :]]
    return np.linalg.det(blocks)


def pull_coefficients(J: np.ndarray, coeffs: np.ndarray, k: int) -> np.ndarray:
    """Pull back pointwise coefficient rows along pointwise Jacobians.

    Args:
        J (np.ndarray): (N, n, m) Jacobians dy/dx
        coeffs (np.ndarray): (N, C(n, k)) coefficients in the y frame
        k (int): form degree

    Returns:
        np.ndarray: (N, C(m, k)) coefficients in the x frame
    """
    C = compound_matrix(J, k)
    return np.einsum("nij,ni->nj", C, coeffs)


def integrate_parameter(form: PolyForm, symbol: sp.Symbol, lower: Any = 0, upper: Any = 1):
    """Integrate every coefficient in ``symbol`` over [lower, upper] exactly."""

    def _integrate(c: sp.Expr) -> sp.Expr:
        if not c.has(symbol):
            return c * (sp.sympify(upper) - sp.sympify(lower))
        antiderivative = sp.Poly(c, symbol).integrate().as_expr()
        return antiderivative.subs(symbol, upper) - antiderivative.subs(symbol, lower)

    return form.map_coefficients(_integrate)


def linear_combination(forms: Iterable[tuple[Any, PolyForm]], dim: int, degree: int) -> PolyForm:
    total = PolyForm.zero(dim, degree)
    for scalar, form in forms:
        total = total + form * scalar
    return total


def wedge_arrays(a: np.ndarray, b: np.ndarray, n: int, p: int, q: int) -> np.ndarray:
    """Pointwise exterior product of coefficient rows.

    Args:
        a (np.ndarray): (N, C(n, p)) coefficients of a p-form
        b (np.ndarray): (N, C(n, q)) coefficients of a q-form
        n (int): ambient dimension

    Returns:
        np.ndarray: (N, C(n, p + q)) coefficients
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    target = basis_indices(n, p + q)
    position = {index: i for i, index in enumerate(target)}
    out = np.zeros((a.shape[0], len(target)))
    for i, I in enumerate(basis_indices(n, p)):
        for j, J in enumerate(basis_indices(n, q)):
            if set(I) & set(J):
                continue
            K = tuple(sorted(I + J))
            out[:, position[K]] += _merge_sign(I, J) * a[:, i] * b[:, j]
    return out


def interior_arrays(X: np.ndarray, coeffs: np.ndarray, n: int, k: int) -> np.ndarray:
    """Pointwise contraction of k-form coefficient rows with vectors.

    Args:
        X (np.ndarray): (N, n) vectors
        coeffs (np.ndarray): (N, C(n, k)) coefficients, ``k >= 1``
        n (int): ambient dimension

    Returns:
        np.ndarray: (N, C(n, k - 1)) coefficients
    """
    if k == 0:
        raise DegreeError("Interior product is not defined on 0-forms")
    X = np.asarray(X, dtype=float)
    coeffs = np.asarray(coeffs, dtype=float)
    position = {index: i for i, index in enumerate(basis_indices(n, k - 1))}
    out = np.zeros((coeffs.shape[0], len(position)))
    for col, I in enumerate(basis_indices(n, k)):
        for pos, i in enumerate(I):
            rest = I[:pos] + I[pos + 1 :]
            out[:, position[rest]] += (-1) ** pos * X[:, i] * coeffs[:, col]
    return out


def exterior_d_arrays(partials: np.ndarray, n: int, k: int) -> np.ndarray:
    """Coefficients of ``d w`` from the partial derivatives of the coefficients of ``w``.

    Args:
        partials (np.ndarray): (n, N, C(n, k)), ``partials[j]`` holds the
            derivatives along ``x_(j+1)``
        n (int): ambient dimension
        k (int): degree of ``w``

    Returns:
        np.ndarray: (N, C(n, k + 1)) coefficients
    """
    target = basis_indices(n, k + 1)
    source = {index: i for i, index in enumerate(basis_indices(n, k))}
    out = np.zeros((partials.shape[1], len(target)))
    for col, K in enumerate(target):
        for pos, j in enumerate(K):
            out[:, col] += (-1) ** pos * partials[j][:, source[K[:pos] + K[pos + 1 :]]]
    return out
