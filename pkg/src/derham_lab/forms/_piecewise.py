from __future__ import annotations

import functools
import logging
from typing import TYPE_CHECKING, Any

import numpy as np
import sympy as sp

from derham_lab._complex import SimplicialComplex, edge_key
from derham_lab._errors import ComplexError, DegreeError, TraceMismatchError
from derham_lab.forms._fields import ComplexField
from derham_lab.forms._poly import (
    AffineMap,
    PolyForm,
    coordinates,
    exterior_d,
    pull_coefficients,
    pullback,
    wedge,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping, Sequence

    from derham_lab._complex import Simplex

logger = logging.getLogger(__name__)


def barycentric_coordinates(m: int) -> list[sp.Expr]:
    """Barycentric coordinates ``t_0..t_m`` of an m-simplex in its chart."""
    x = coordinates(m)
    return [1 - sum(x, sp.Integer(0)), *x]


def barycentric_form(m: int, i: int) -> PolyForm:
    """The coordinate function ``t_i`` as a 0-form on the chart of an m-simplex."""
    return PolyForm.function(m, barycentric_coordinates(m)[i])


@functools.lru_cache(maxsize=4096)
def face_embedding(face: Simplex, facet: Simplex) -> AffineMap:
    """Affine map from the chart of ``face`` into the chart of ``facet``.

    A point with face barycentrics ``s`` goes to the facet point whose
    barycentric coordinate at vertex ``v`` is ``s_v`` if ``v`` is in the face
    and 0 otherwise.
    """
    if not set(face) <= set(facet):
        raise ComplexError(f"{face} is not a face of {facet}")
    k, m = len(face) - 1, len(facet) - 1
    matrix = sp.zeros(m, k)
    offset = [0] * m
    for i, v in enumerate(facet[1:]):
        if v not in face:
            continue
        j = face.index(v)
        if j == 0:
            offset[i] = 1
            for col in range(k):
                matrix[i, col] = -1
        else:
            matrix[i, j - 1] = 1
    return AffineMap(matrix, offset)


@functools.lru_cache(maxsize=4096)
def face_embedding_arrays(face: Simplex, facet: Simplex) -> tuple[np.ndarray, np.ndarray]:
    """Numeric (matrix, offset) of :func:`face_embedding`."""
    A = face_embedding(face, facet)
    m, k = A.matrix.shape
    matrix = np.array(A.matrix.tolist(), dtype=float).reshape(m, k)
    offset = np.array([float(b) for b in A.offset], dtype=float)
    matrix.setflags(write=False)
    offset.setflags(write=False)
    return matrix, offset


def to_barycentric(coords: np.ndarray) -> np.ndarray:
    """Chart points (N, m) to barycentric rows (N, m + 1)."""
    coords = np.asarray(coords, dtype=float)
    return np.concatenate([1.0 - coords.sum(axis=1, keepdims=True), coords], axis=1)


class PiecewiseForm(ComplexField):
    """A k-form given by one polynomial form per maximal simplex.

    Each piece lives in the chart of its maximal simplex (see
    :class:`~derham_lab.forms.ComplexField`). Missing pieces are zero. Pieces
    are meant to agree on shared faces; :meth:`trace_mismatch` certifies it.

    Args:
        complex (SimplicialComplex): complex the form lives on
        degree (int): form degree
        pieces (Mapping[Simplex, PolyForm], optional): piece per maximal simplex
    """

    def __init__(
        self,
        complex: SimplicialComplex,
        degree: int,
        pieces: Mapping[Simplex, PolyForm] | None = None,
    ):
        super().__init__(complex, degree)
        facets = set(complex.facets)
        self.pieces: dict[Simplex, PolyForm] = {}
        for facet, piece in (pieces or {}).items():
            facet = tuple(facet)
            if facet not in facets:
                raise ComplexError(f"{facet} is not a maximal simplex of the complex")
            if piece.dim != len(facet) - 1:
                raise ComplexError(f"Piece of dim {piece.dim} on the simplex {facet}")
            if piece.is_zero():
                continue
            if piece.degree != degree:
                raise DegreeError(f"Piece of degree {piece.degree} in a {degree}-form")
            self.pieces[facet] = piece

    @classmethod
    def zero(cls, complex: SimplicialComplex, degree: int) -> PiecewiseForm:
        return cls(complex, degree)

    @classmethod
    def from_function(
        cls, complex: SimplicialComplex, degree: int, make: Callable[[Simplex], PolyForm]
    ) -> PiecewiseForm:
        return cls(complex, degree, {f: make(f) for f in complex.facets})

    def piece(self, facet: Simplex) -> PolyForm:
        facet = tuple(facet)
        if facet in self.pieces:
            return self.pieces[facet]
        return PolyForm.zero(len(facet) - 1, self.degree)

    def __repr__(self) -> str:
        return f"PiecewiseForm(degree={self.degree}, pieces={len(self.pieces)})"

    # algebra

    def _check(self, other: PiecewiseForm) -> None:
        if other.complex != self.complex:
            raise ComplexError("Piecewise forms live on different complexes")

    def __add__(self, other):
        if not isinstance(other, PiecewiseForm):
            return super().__add__(other)
        self._check(other)
        if other.degree != self.degree:
            raise DegreeError(f"Degrees {self.degree} and {other.degree} differ")
        return PiecewiseForm(
            self.complex,
            self.degree,
            {f: self.piece(f) + other.piece(f) for f in self.complex.facets},
        )

    def __neg__(self) -> PiecewiseForm:
        return PiecewiseForm(self.complex, self.degree, {f: -p for f, p in self.pieces.items()})

    def __sub__(self, other):
        if not isinstance(other, PiecewiseForm):
            return super().__sub__(other)
        return self + (-other)

    def __mul__(self, scalar: Any) -> PiecewiseForm:
        return PiecewiseForm(
            self.complex, self.degree, {f: p * scalar for f, p in self.pieces.items()}
        )

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PiecewiseForm):
            return NotImplemented
        if other.complex != self.complex:
            return False
        return all(self.piece(f) == other.piece(f) for f in self.complex.facets)

    def __hash__(self) -> int:
        return hash((self.degree, tuple(sorted(self.pieces))))

    def is_zero(self) -> bool:
        return not self.pieces

    def exterior_d(self) -> PiecewiseForm:
        return PiecewiseForm(
            self.complex, self.degree + 1, {f: exterior_d(p) for f, p in self.pieces.items()}
        )

    def wedge(self, other: PiecewiseForm) -> PiecewiseForm:
        self._check(other)
        return PiecewiseForm(
            self.complex,
            self.degree + other.degree,
            {f: wedge(self.piece(f), other.piece(f)) for f in self.complex.facets},
        )

    def map_pieces(self, func: Callable[[PolyForm], PolyForm]) -> PiecewiseForm:
        pieces = {f: func(p) for f, p in self.pieces.items()}
        return PiecewiseForm(self.complex, self.degree, pieces)

    def poly_degree(self) -> int:
        return max((p.poly_degree() for p in self.pieces.values()), default=0)

    @property
    def default_quadrature_degree(self) -> int:  # type: ignore[override]
        return 2 * self.poly_degree() + 2

    # traces

    def trace(self, face: Sequence[int], facet: Simplex | None = None) -> PolyForm:
        """Pullback to the chart of ``face`` from ``facet`` (first containing facet by default)."""
        face = self.complex.check_simplex(face)
        if facet is None:
            facet = self.complex.facets_containing(face)[0]
        return pullback(face_embedding(face, tuple(facet)), self.piece(facet))

    def trace_mismatch(self) -> list[tuple[Simplex, Simplex, Simplex]]:
        """Faces on which two maximal simplices disagree.

        Returns:
            list[tuple]: ``(face, facet_a, facet_b)`` for each shared face of
                dimension at least ``degree`` where the traces differ
        """
        mismatches = []
        for k in self.complex.simplices:
            if k < self.degree:
                continue
            for face in self.complex.simplices[k]:
                facets = self.complex.facets_containing(face)
                if len(facets) < 2:
                    continue
                reference = self.trace(face, facets[0])
                for other in facets[1:]:
                    if self.trace(face, other) != reference:
                        mismatches.append((face, facets[0], other))
        return mismatches

    def check_compatible(self) -> None:
        mismatches = self.trace_mismatch()
        if mismatches:
            face, a, b = mismatches[0]
            raise TraceMismatchError(
                f"Pieces on {a} and {b} disagree on the face {face} "
                f"({len(mismatches)} mismatching faces)"
            )

    def restrict_to_subcomplex(self, sub: SimplicialComplex) -> PiecewiseForm:
        """Restriction along the inclusion of a sub-complex."""
        pieces = {}
        for facet in sub.facets:
            if facet not in self.complex:
                raise ComplexError(f"{facet} is not a simplex of the complex")
            if len(facet) - 1 < self.degree:
                continue
            pieces[facet] = self.trace(facet)
        return PiecewiseForm(sub, self.degree, pieces)

    def restrict_to_face(self, face: Sequence[int]) -> PiecewiseForm:
        """Restriction to the complex generated by a single face."""
        face = self.complex.check_simplex(face)
        return self.restrict_to_subcomplex(SimplicialComplex([face], name=edge_key(face)))

    # numerics

    def evaluate(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        return self.piece(facet).evaluate(coords)

    # serialization

    def to_dict(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "pieces": {
                edge_key(f): p.to_dict()["terms"] for f, p in sorted(self.pieces.items())
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], complex: SimplicialComplex) -> PiecewiseForm:
        degree = int(data["degree"])
        pieces = {}
        for key, terms in data.get("pieces", {}).items():
            facet = tuple(int(v) for v in str(key).split("-"))
            pieces[facet] = PolyForm.from_dict(
                {"dim": len(facet) - 1, "degree": degree, "terms": terms}
            )
        return cls(complex, degree, pieces)



def restrict_to_face(omega: PiecewiseForm, face: Sequence[int]) -> PiecewiseForm:
    """Restriction of a piecewise form to the complex generated by ``face``."""
    return omega.restrict_to_face(face)


def field_trace(
    field: ComplexField, face: Sequence[int], coords: np.ndarray, facet: Simplex | None = None
) -> np.ndarray:
    """Coefficients of the trace of a field on ``face`` at face chart points.

    Args:
        field (ComplexField): the form
        face (Sequence[int]): a simplex of the complex
        coords (np.ndarray): (N, dim face) chart points of the face
        facet (Simplex, optional): maximal simplex to evaluate from, the
            first one containing the face by default

    Returns:
        np.ndarray: (N, C(dim face, degree)) coefficients
    """
    face = field.complex.check_simplex(face)
    if facet is None:
        facet = field.complex.facets_containing(face)[0]
    matrix, offset = face_embedding_arrays(face, tuple(facet))
    coords = np.asarray(coords, dtype=float)
    if coords.ndim == 1:
        coords = coords.reshape(-1, len(face) - 1)
    inside = coords @ matrix.T + offset
    values = field.evaluate(tuple(facet), inside)
    J = np.broadcast_to(matrix, (len(coords), *matrix.shape))
    return pull_coefficients(J, values, field.degree)
