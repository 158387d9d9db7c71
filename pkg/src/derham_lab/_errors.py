"""Exception types raised by derham_lab.

Every error derives from :class:`DerhamLabError` and from the builtin exception
that best describes it, so ``except ValueError`` keeps working for callers that
do not care about the finer distinction.
"""

from __future__ import annotations


class DerhamLabError(Exception):
    """Base class for all derham_lab errors."""


class ComplexError(DerhamLabError, ValueError):
    """Malformed simplicial complex input or unknown simplex/vertex."""


class DimensionMismatchError(DerhamLabError, ValueError):
    """Ambient dimensions of two operands disagree."""


class DegreeError(DerhamLabError, ValueError):
    """Form degree is not admissible for the requested operation."""


class UnsupportedFlowError(DerhamLabError, ValueError):
    """Flow cannot be represented exactly by polynomial substitution."""


class NotClosedError(DerhamLabError, ValueError):
    """A closed form was required."""


class QuadratureError(DerhamLabError, ValueError):
    """Quadrature rule unavailable or too weak for the integrand."""


class MissingChartError(DerhamLabError, ValueError):
    """No star chart is available for a vertex."""


class SupportError(DerhamLabError, ValueError):
    """Support containment conditions cannot be met."""


class TraceMismatchError(DerhamLabError, ValueError):
    """Pieces of a piecewise form disagree on a shared face."""


class BouquetError(DerhamLabError, ValueError):
    """Invalid bouquet presentation."""


class NotInKernelError(DerhamLabError, ValueError):
    """Form does not lie in the kernel of the de Rham map."""


class ResidualError(DerhamLabError, ValueError):
    """An iterative or degree-capped construction missed its tolerance."""
