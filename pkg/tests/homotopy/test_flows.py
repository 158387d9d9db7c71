import pytest
import sympy as sp
from derham_lab._errors import DimensionMismatchError, UnsupportedFlowError
from derham_lab.forms import PolyForm, VectorFieldPoly, coordinates
from derham_lab.homotopy import (
    FlowKind,
    FlowSpec,
    flow_group_law_check,
    flow_pullback,
    lie_flow_check,
)

from tests.test_utils import get_random_polyforms

FLOWS = [
    FlowSpec.translation([1, sp.Rational(-1, 2)]),
    FlowSpec.linear([[0, 1], [0, 0]]),
    FlowSpec.scaling(2),
]


def test_flow_specs():
    assert FLOWS[0].kind is FlowKind.TRANSLATION
    assert FLOWS[1].kind == "linear"
    assert FLOWS[2].dim == 2
    with pytest.raises(UnsupportedFlowError):
        FlowSpec.linear([[0, 1], [1, 0]])
    with pytest.raises(DimensionMismatchError):
        FlowSpec.linear([[0, 1, 0], [0, 0, 1]])


def test_flow_pullback():
    x, y = coordinates(2)
    t = sp.Symbol("t")
    omega = PolyForm.function(2, x)
    # exp(t A) (x, y) = (x + t y, y)
    assert flow_pullback(FLOWS[1], t, omega) == PolyForm.function(2, x + t * y)
    assert flow_pullback(FLOWS[2], 3, PolyForm.basis(2, (0, 1))) == PolyForm.basis(2, (0, 1), 9)
    with pytest.raises(DimensionMismatchError):
        flow_pullback(FLOWS[0], 1, PolyForm.function(1, 1))


@pytest.mark.parametrize("flow", FLOWS, ids=lambda f: f.kind.value)
def test_group_law(flow):
    t0, t1 = sp.Rational(1, 3), sp.Rational(-5, 4)
    for k in range(3):
        for omega in get_random_polyforms(2, k, count=2, seed=k):
            assert flow_group_law_check(flow, t0, t1, omega).is_zero()


def test_lie_flow_check():
    X = VectorFieldPoly.linear([[1, 2], [0, -1]], [1, 0])
    for k in range(3):
        for omega in get_random_polyforms(2, k, count=2, seed=5 + k):
            assert lie_flow_check(X, omega).is_zero()

    x, y = coordinates(2)
    with pytest.raises(UnsupportedFlowError):
        lie_flow_check(VectorFieldPoly(2, [x**2, 0]), PolyForm.function(2, y))
    with pytest.raises(DimensionMismatchError):
        lie_flow_check(X, PolyForm.function(1, 1))
