from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from math import comb
from typing import TYPE_CHECKING

import numpy as np

from derham_lab.forms._poly import PolyForm, exterior_d, exterior_d_arrays

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)


class PatchField(ABC):
    """A k-form on an open patch of R^n, evaluated at points.

    Coefficients are returned in the ``dx_I`` frame of R^n. A field may fail
    to be smooth on a few known sets; local operators split their time
    integrals where a flow line crosses them.

    Attributes:
        kink_points (tuple[float, ...]): for n = 1, the positions where the
            field may fail to be smooth
        kink_angles (tuple[float, ...]): for n = 2, angles of the rays from
            the origin where the field may fail to be smooth
    """

    kink_points: Sequence[float] = ()
    kink_angles: Sequence[float] = ()

    def __init__(self, dim: int, degree: int):
        self.dim = dim
        self.degree = degree

    @abstractmethod
    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Coefficients at (N, n) points, shape (N, C(n, degree))."""
        raise NotImplementedError

    @abstractmethod
    def exterior_d(self) -> PatchField:
        raise NotImplementedError


class PolyPatchField(PatchField):
    """A polynomial form viewed as a patch field."""

    def __init__(self, form: PolyForm):
        super().__init__(form.dim, form.degree)
        self.form = form

    def __repr__(self) -> str:
        return f"PolyPatchField({self.form})"

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        return self.form.evaluate(np.asarray(points, dtype=float))

    def exterior_d(self) -> PatchField:
        return PolyPatchField(exterior_d(self.form))


def as_patch_field(field: PatchField | PolyForm) -> PatchField:
    if isinstance(field, PolyForm):
        return PolyPatchField(field)
    if not isinstance(field, PatchField):
        raise TypeError(f"Expected a PatchField or PolyForm, got {type(field).__name__}")
    return field


def patch_derivative(field: PatchField, points: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """``d`` of a patch field at points by central differences."""
    points = np.asarray(points, dtype=float)
    n, k = field.dim, field.degree
    if k >= n:
        return np.zeros((len(points), comb(n, k + 1)))
    partials = np.empty((n, len(points), comb(n, k)))
    for j in range(n):
        shift = np.zeros(n)
        shift[j] = step
        partials[j] = (field.evaluate(points + shift) - field.evaluate(points - shift)) / (2 * step)
    return exterior_d_arrays(partials, n, k)
