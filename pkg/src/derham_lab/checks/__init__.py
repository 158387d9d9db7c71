"""Subpackage of verification checks run by :func:`derham_lab.run_checks` and the CLI."""

from ._analytic import (
    ExtensionNormCheck,
    GlobalRegularizationCheck,
    OperatorNormTrendCheck,
    SupBoundCheck,
)
from ._base import Check, Results
from ._cohomology import (
    ChainMapCheck,
    DeRhamCheck,
    ExactnessWitnessCheck,
    WhitneySplitCheck,
)
from ._exact import CartanIdentityCheck, KernelMomentCheck, MollifierHomotopyCheck

__all__ = [
    "CartanIdentityCheck",
    "ChainMapCheck",
    "Check",
    "DeRhamCheck",
    "ExactnessWitnessCheck",
    "ExtensionNormCheck",
    "GlobalRegularizationCheck",
    "KernelMomentCheck",
    "MollifierHomotopyCheck",
    "OperatorNormTrendCheck",
    "Results",
    "SupBoundCheck",
    "WhitneySplitCheck",
]
