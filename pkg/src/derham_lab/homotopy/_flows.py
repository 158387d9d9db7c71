from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import sympy as sp

from derham_lab._errors import DimensionMismatchError, UnsupportedFlowError
from derham_lab.forms._poly import AffineMap, PolyForm, VectorFieldPoly, lie_derivative, pullback

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)


@enum.unique
class FlowKind(str, enum.Enum):
    """Flows whose pullbacks stay polynomial."""

    # x -> x + t v
    TRANSLATION = "translation"
    # x -> exp(t A) x, A nilpotent
    LINEAR = "linear"
    # x -> t x
    SCALING = "scaling"


@dataclass(frozen=True)
class FlowSpec:
    """A one-parameter family of affine maps of R^n.

    Translations and linear flows are additive in time
    (``s_(t0 + t1) = s_t1 o s_t0``). The scaling family ``x -> t x`` is the
    identity at ``t = 1`` and multiplicative in time.
    """

    kind: FlowKind
    dim: int
    vector: tuple[Any, ...] | None = None
    matrix: tuple[tuple[Any, ...], ...] | None = None

    @classmethod
    def translation(cls, vector: Sequence[Any]) -> FlowSpec:
        v = tuple(sp.sympify(c) for c in vector)
        return cls(FlowKind.TRANSLATION, len(v), vector=v)

    @classmethod
    def linear(cls, matrix: Sequence[Sequence[Any]]) -> FlowSpec:
        A = sp.Matrix(matrix)
        if A.shape[0] != A.shape[1]:
            raise DimensionMismatchError(f"Linear flow needs a square matrix, got {A.shape}")
        n = A.shape[0]
        if n and not (A**n).is_zero_matrix:
            raise UnsupportedFlowError(
                "Only nilpotent linear flows have polynomial pullbacks; "
                f"{A.tolist()} is not nilpotent"
            )
        return cls(FlowKind.LINEAR, n, matrix=tuple(tuple(row) for row in A.tolist()))

    @classmethod
    def scaling(cls, dim: int) -> FlowSpec:
        return cls(FlowKind.SCALING, dim)

    def affine_map(self, t: Any) -> AffineMap:
        """The time-``t`` map of the flow (``t`` may be a symbol)."""
        t = sp.sympify(t)
        n = self.dim
        if self.kind is FlowKind.TRANSLATION:
            return AffineMap(sp.eye(n), [t * c for c in self.vector])
        if self.kind is FlowKind.SCALING:
            return AffineMap(t * sp.eye(n))
        A = sp.Matrix(self.matrix)
        term = sp.eye(n)
        total = sp.eye(n)
        for j in range(1, n + 1):
            term = term * (t * A) / j
            total += term
        return AffineMap(total)

    def compose_times(self, t0: Any, t1: Any) -> Any:
        """Time of ``s_t1 o s_t0``."""
        if self.kind is FlowKind.SCALING:
            return sp.sympify(t0) * sp.sympify(t1)
        return sp.sympify(t0) + sp.sympify(t1)


def flow_pullback(flow: FlowSpec, t: Any, omega: PolyForm) -> PolyForm:
    """Exact pullback of ``omega`` by the time-``t`` map of ``flow``."""
    if omega.dim != flow.dim:
        raise DimensionMismatchError(f"Flow on R^{flow.dim} and form on R^{omega.dim}")
    return pullback(flow.affine_map(t), omega)


def flow_group_law_check(flow: FlowSpec, t0: Any, t1: Any, omega: PolyForm) -> PolyForm:
    """``s*_(t0 . t1) w - s*_t0 s*_t1 w``; zero for every supported flow."""
    combined = flow_pullback(flow, flow.compose_times(t0, t1), omega)
    stepwise = flow_pullback(flow, t0, flow_pullback(flow, t1, omega))
    return combined - stepwise


def lie_flow_check(X: VectorFieldPoly, omega: PolyForm) -> PolyForm:
    """Flow derivative of ``omega`` along an affine field minus its Lie derivative.

    The flow of ``X(x) = A x + b`` agrees to first order in ``t`` with
    ``x -> x + t (A x + b)``, so the derivative at ``t = 0`` is computed from
    that map exactly.

    Raises:
        UnsupportedFlowError: if ``X`` is not affine
    """
    if not X.is_affine():
        raise UnsupportedFlowError(f"Only affine fields have explicit flows, got {X}")
    if X.dim != omega.dim:
        raise DimensionMismatchError(f"Field of dim {X.dim} and form of dim {omega.dim}")
    A, b = X.affine_parts()
    t = sp.Symbol("t")
    first_order = AffineMap(sp.eye(X.dim) + t * A, list(t * b))
    pulled = pullback(first_order, omega)
    derivative = pulled.map_coefficients(lambda c: sp.diff(c, t).subs(t, 0))
    return derivative - lie_derivative(X, omega)
