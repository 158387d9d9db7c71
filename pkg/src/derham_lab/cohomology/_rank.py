"""Exact linear algebra over the rationals.

All helpers take sympy matrices with rational entries and work through
``DomainMatrix`` over QQ, so ranks and solutions are exact.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import sympy as sp
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)


def to_domain(matrix: sp.Matrix) -> DomainMatrix:
    return DomainMatrix.from_Matrix(sp.Matrix(matrix)).convert_to(QQ)


def exact_rank(matrix: sp.Matrix) -> int:
    matrix = sp.Matrix(matrix)
    if 0 in matrix.shape:
        return 0
    return to_domain(matrix).rank()


def exact_rref(matrix: sp.Matrix) -> tuple[sp.Matrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    matrix = sp.Matrix(matrix)
    if 0 in matrix.shape:
        return matrix, ()
    reduced, pivots = to_domain(matrix).rref()
    return reduced.to_Matrix(), tuple(pivots)


def nullspace(matrix: sp.Matrix) -> list[sp.Matrix]:
    """Basis of the kernel, one column vector per free column of the rref."""
    matrix = sp.Matrix(matrix)
    n = matrix.shape[1]
    if matrix.shape[0] == 0:
        return [sp.Matrix([1 if i == j else 0 for i in range(n)]) for j in range(n)]
    reduced, pivots = exact_rref(matrix)
    basis = []
    for free in (j for j in range(n) if j not in pivots):
        vector = sp.zeros(n, 1)
        vector[free] = 1
        for row, col in enumerate(pivots):
            vector[col] = -reduced[row, free]
        basis.append(vector)
    return basis


def solve_exact(A: sp.Matrix, b: sp.Matrix) -> tuple[sp.Matrix | None, int]:
    """One exact solution of ``A x = b`` with free variables set to zero.

    Returns:
        tuple: the solution (None if the system is inconsistent) and the rank
            of ``A``
    """
    A = sp.Matrix(A)
    b = sp.Matrix(b)
    n = A.shape[1]
    if A.shape[0] == 0:
        return sp.zeros(n, 1), 0
    reduced, pivots = exact_rref(A.row_join(b))
    if n in pivots:
        return None, len(pivots) - 1
    x = sp.zeros(n, 1)
    for row, col in enumerate(pivots):
        x[col] = reduced[row, n]
    return x, len(pivots)


def extend_basis(
    span: Sequence[sp.Matrix], candidates: Sequence[sp.Matrix], size: int
) -> list[sp.Matrix]:
    """Greedily pick candidates that are independent modulo ``span``."""
    chosen: list[sp.Matrix] = []
    columns = list(span)
    rank = exact_rank(sp.Matrix.hstack(*columns)) if columns else 0
    for vector in candidates:
        if len(chosen) >= size:
            break
        trial = sp.Matrix.hstack(*columns, vector)
        trial_rank = exact_rank(trial)
        if trial_rank > rank:
            columns.append(vector)
            chosen.append(vector)
            rank = trial_rank
    return chosen
