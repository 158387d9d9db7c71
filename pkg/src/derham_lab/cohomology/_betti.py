from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import sympy as sp

from derham_lab._errors import DegreeError, ResidualError
from derham_lab.cohomology._rank import exact_rank, extend_basis, nullspace
from derham_lab.whitney._cochain import Cochain, coboundary_matrix
from derham_lab.whitney._derham import reference_derham_map
from derham_lab.whitney._whitney import whitney

if TYPE_CHECKING:
    from derham_lab._complex import SimplicialComplex
    from derham_lab.forms._piecewise import PiecewiseForm

logger = logging.getLogger(__name__)


@dataclass
class CohomologyResult:
    """Dimension of one cohomology group with a basis of representatives.

    Attributes:
        degree (int): k
        betti (int): ``dim ker d^k - rank d^(k-1)``
        kernel_dim (int): ``dim ker d^k``
        image_rank (int): ``rank d^(k-1)``
        representatives (list): cocycles (Cochain) or closed Whitney forms
            (PiecewiseForm) spanning the group
    """

    degree: int
    betti: int
    kernel_dim: int
    image_rank: int
    representatives: list[Any] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "betti": self.betti,
            "kernel_dim": self.kernel_dim,
            "image_rank": self.image_rank,
            "representatives": [r.to_dict() for r in self.representatives],
        }


def _check_degree(K: SimplicialComplex, k: int) -> None:
    if not 0 <= k <= K.dim:
        raise DegreeError(f"Degree {k} out of range 0..{K.dim}")


def _cohomology_from_matrices(
    k: int, d_k: sp.Matrix, d_prev: sp.Matrix | None
) -> tuple[int, int, list[sp.Matrix]]:
    kernel = nullspace(d_k)
    image = [] if d_prev is None else [d_prev[:, j] for j in range(d_prev.shape[1])]
    image_rank = exact_rank(d_prev) if d_prev is not None else 0
    betti = len(kernel) - image_rank
    representatives = extend_basis(image, kernel, betti)
    return betti, image_rank, representatives


def cochain_cohomology(K: SimplicialComplex, k: int, p: float = 2.0) -> CohomologyResult:
    """Cohomology of the cochain complex of ``K`` in degree k.

    Ranks are exact over QQ, so the Betti number does not depend on ``p``;
    ``p`` is attached to the representative cochains.

    Raises:
        DegreeError: if k is outside 0..dim K
    """
    _check_degree(K, k)
    d_k = coboundary_matrix(K, k)
    d_prev = coboundary_matrix(K, k - 1) if k > 0 else None
    betti, image_rank, reps = _cohomology_from_matrices(k, d_k, d_prev)
    representatives = [Cochain(K, k, list(vector), p=p) for vector in reps]
    logger.debug(f"H^{k} of {K.name}: betti {betti}")
    return CohomologyResult(k, betti, betti + image_rank, image_rank, representatives)


def whitney_differential_matrix(K: SimplicialComplex, k: int, verify: bool = True) -> sp.Matrix:
    """Matrix of d on the Whitney forms in the basis ``W(chi_sigma)``.

    Columns are the exterior derivatives of the basis k-forms written in the
    (k+1)-basis; the coordinates are exact reference integrals. With
    ``verify`` every column is checked to reproduce the derivative exactly.

    Raises:
        ResidualError: if a derivative leaves the span of the Whitney forms
    """
    _check_degree(K, k)
    rows = len(K.simplices.get(k + 1, ()))
    columns = []
    for sigma in K.simplices[k]:
        basis = whitney(Cochain.indicator(K, sigma))
        derivative = basis.exterior_d()
        if k == K.dim:
            columns.append(sp.zeros(0, 1))
            continue
        coords = reference_derham_map(derivative)
        if verify and whitney(coords) != derivative:
            raise ResidualError(f"d W(chi_{sigma}) is not a Whitney form")
        columns.append(sp.Matrix(coords.values))
    if not columns:
        return sp.zeros(rows, 0)
    return sp.Matrix.hstack(*columns)


def whitney_subcomplex_cohomology(K: SimplicialComplex, k: int) -> CohomologyResult:
    """Cohomology of the finite dimensional complex spanned by Whitney forms.

    Representatives are closed Whitney forms.
    """
    _check_degree(K, k)
    d_k = whitney_differential_matrix(K, k)
    d_prev = whitney_differential_matrix(K, k - 1) if k > 0 else None
    betti, image_rank, reps = _cohomology_from_matrices(k, d_k, d_prev)
    representatives: list[PiecewiseForm] = [
        whitney(Cochain(K, k, list(vector))) for vector in reps
    ]
    return CohomologyResult(k, betti, betti + image_rank, image_rank, representatives)


def betti_numbers(K: SimplicialComplex, source: str = "cochain") -> list[int]:
    """Betti numbers of all degrees from the cochain or the Whitney complex."""
    if source == "cochain":
        compute = cochain_cohomology
    elif source == "whitney":
        compute = whitney_subcomplex_cohomology
    else:
        raise ValueError(f"Unknown source {source!r}, expected 'cochain' or 'whitney'")
    betti = [compute(K, k).betti for k in range(K.dim + 1)]
    logger.info(f"Betti numbers of {K.name} from the {source} complex: {betti}")
    return betti


def euler_from_betti(betti: list[int]) -> int:
    return sum((-1) ** k * b for k, b in enumerate(betti))
