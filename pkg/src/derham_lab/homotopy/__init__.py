"""Exact Cartan homotopies: polynomial flows, Q_v and Poincare primitives."""

from ._cartan import (
    cartan_Q,
    cartan_suite,
    lie_d_commutator,
    poincare_primitive,
    verify_cartan_identity,
)
from ._flows import FlowKind, FlowSpec, flow_group_law_check, flow_pullback, lie_flow_check

__all__ = [
    "FlowKind",
    "FlowSpec",
    "cartan_Q",
    "cartan_suite",
    "flow_group_law_check",
    "flow_pullback",
    "lie_d_commutator",
    "lie_flow_check",
    "poincare_primitive",
    "verify_cartan_identity",
]
