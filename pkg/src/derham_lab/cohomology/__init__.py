"""Cochain and Whitney cohomology, exact ranks and primitives of exact forms."""

from ._betti import (
    CohomologyResult,
    betti_numbers,
    cochain_cohomology,
    euler_from_betti,
    whitney_differential_matrix,
    whitney_subcomplex_cohomology,
)
from ._derham_check import derham_iso_check
from ._exactness import WitnessResult, exactness_witness, random_exact_form, witness_suite
from ._rank import exact_rank, exact_rref, extend_basis, nullspace, solve_exact

__all__ = [
    "CohomologyResult",
    "WitnessResult",
    "betti_numbers",
    "cochain_cohomology",
    "derham_iso_check",
    "euler_from_betti",
    "exact_rank",
    "exact_rref",
    "exactness_witness",
    "extend_basis",
    "nullspace",
    "random_exact_form",
    "solve_exact",
    "whitney_differential_matrix",
    "whitney_subcomplex_cohomology",
    "witness_suite",
]
