from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from math import comb
from typing import TYPE_CHECKING

import numpy as np

from derham_lab._errors import ComplexError, DegreeError
from derham_lab.forms._quadrature import measure_factor, stroud_rule

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

    from derham_lab._complex import Simplex, SimplicialComplex

logger = logging.getLogger(__name__)


class ComplexField(ABC):
    """A k-form on a simplicial complex that can be evaluated numerically.

    A field is evaluated facet by facet: points are given in the chart
    coordinates ``x1..xm`` of a maximal simplex ``(v0, ..., vm)``, where
    ``x_i`` is the barycentric coordinate of ``v_i``, and coefficients are
    returned in the ``dx_I`` frame of that chart.

    Args:
        complex (SimplicialComplex): the complex the form lives on
        degree (int): form degree
    """

    #: polynomial degree used by default when integrating |field|^p
    default_quadrature_degree = 8

    def __init__(self, complex: SimplicialComplex, degree: int):
        self.complex = complex
        self.degree = degree

    @abstractmethod
    def evaluate(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        """Coefficients on ``facet`` at chart points.

        Args:
            facet (Simplex): a maximal simplex of the complex
            coords (np.ndarray): (N, m) chart coordinates

        Returns:
            np.ndarray: (N, C(m, degree)) coefficients
        """
        raise NotImplementedError

    @abstractmethod
    def exterior_d(self) -> ComplexField:
        raise NotImplementedError

    def evaluate_many(self, facet_ids: np.ndarray, coords: np.ndarray) -> np.ndarray:
        """Evaluate at points scattered over the facets of a pure complex.

        Args:
            facet_ids (np.ndarray): (N,) positions in ``complex.facets``
            coords (np.ndarray): (N, m) chart coordinates

        Returns:
            np.ndarray: (N, C(m, degree)) coefficients
        """
        if not self.complex.is_pure:
            raise ComplexError("evaluate_many needs a pure complex")
        facet_ids = np.asarray(facet_ids, dtype=int)
        coords = np.asarray(coords, dtype=float)

        out = np.zeros((len(facet_ids), comb(self.complex.dim, self.degree)))
        for fid in np.unique(facet_ids):
            mask = facet_ids == fid
            out[mask] = self.evaluate(self.complex.facets[fid], coords[mask])
        return out

    def quadrature(
        self, degree: int | None = None
    ) -> Iterator[tuple[Simplex, np.ndarray, np.ndarray]]:
        """Quadrature nodes adapted to this field.

        Yields ``(facet, chart points, weights)`` with weights in the
        unit-edge measure. The default is a Stroud rule on every facet.
        """
        degree = self.default_quadrature_degree if degree is None else degree
        for facet in self.complex.facets:
            m = len(facet) - 1
            points, weights = stroud_rule(m, degree)
            yield facet, points, weights * measure_factor(m)

    def _combine(self, other: ComplexField, sign: float) -> LinearCombinationField:
        if not isinstance(other, ComplexField):
            return NotImplemented
        return LinearCombinationField([(1.0, self), (sign, other)])

    def __add__(self, other: ComplexField) -> ComplexField:
        return self._combine(other, 1.0)

    def __sub__(self, other: ComplexField) -> ComplexField:
        return self._combine(other, -1.0)

    def __mul__(self, scalar: float) -> ComplexField:
        return LinearCombinationField([(float(scalar), self)])

    __rmul__ = __mul__


class LinearCombinationField(ComplexField):
    """Finite real linear combination of fields of the same degree."""

    def __init__(self, terms: Sequence[tuple[float, ComplexField]]):
        if not terms:
            raise ValueError("A linear combination needs at least one term")
        first = terms[0][1]
        for _, field in terms:
            if field.degree != first.degree:
                raise DegreeError(
                    f"Cannot combine fields of degrees {first.degree} and {field.degree}"
                )
            if field.complex != first.complex:
                raise ComplexError("Cannot combine fields on different complexes")
        super().__init__(first.complex, first.degree)
        self.terms = [(float(c), f) for c, f in terms]
        self.default_quadrature_degree = max(f.default_quadrature_degree for _, f in terms)

    def evaluate(self, facet, coords):
        total = None
        for c, field in self.terms:
            value = c * field.evaluate(facet, coords)
            total = value if total is None else total + value
        return total

    def exterior_d(self):
        return LinearCombinationField([(c, f.exterior_d()) for c, f in self.terms])

    def quadrature(self, degree=None):
        # the first term with its own rule decides where the kinks are
        for _, field in self.terms:
            if type(field).quadrature is not ComplexField.quadrature:
                return field.quadrature(degree)
        return super().quadrature(degree)
