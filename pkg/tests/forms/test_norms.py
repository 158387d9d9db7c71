import math

import numpy as np
import pytest
from derham_lab.forms import (
    LinearCombinationField,
    PiecewiseForm,
    PolyForm,
    PolyPatchField,
    as_patch_field,
    coordinates,
    lp_norm,
    patch_derivative,
    patch_lp_norm,
    patch_sobolev_norm,
    pointwise_norm,
    sobolev_norm,
)
from derham_lab.loaders import reference_complex

from tests.test_utils import get_disk_points, get_whitney_basis


def test_pointwise_norm():
    np.testing.assert_allclose(pointwise_norm(np.array([[3.0, 4.0], [0.0, 1.0]])), [5.0, 1.0])
    assert pointwise_norm(np.zeros((4, 0))).tolist() == [0.0] * 4


@pytest.mark.parametrize("p", [1, 2, 3.5, math.inf])
def test_edge_indicator_norm(p):
    _, forms = get_whitney_basis("circle", 1)
    # the Whitney form of an edge is dx on that edge and zero elsewhere
    assert lp_norm(forms[0], p) == pytest.approx(1.0)


def test_hat_norms():
    _, (_, hat1, _) = get_whitney_basis("circle", 0)
    assert lp_norm(hat1, 2) == pytest.approx(math.sqrt(2 / 3))
    assert lp_norm(hat1, 1) == pytest.approx(1.0)
    assert lp_norm(hat1.exterior_d(), 2) == pytest.approx(math.sqrt(2))
    assert sobolev_norm(hat1, 2) == pytest.approx(math.sqrt(8 / 3))
    assert sobolev_norm(hat1, math.inf) == pytest.approx(1.0)


def test_triangle_area():
    K = reference_complex("triangle")
    one = PiecewiseForm(K, 0, {(0, 1, 2): PolyForm.function(2, 1)})
    assert lp_norm(one, 1) == pytest.approx(math.sqrt(3) / 4)


def test_linear_combination():
    _, (hat0, hat1, _) = get_whitney_basis("circle", 0)
    field = LinearCombinationField([(2.0, hat1)])
    assert lp_norm(field, 2) == pytest.approx(2 * math.sqrt(2 / 3))
    assert lp_norm(field - field, 2) == pytest.approx(0.0)
    assert isinstance(field + hat0, LinearCombinationField)
    with pytest.raises(ValueError):
        LinearCombinationField([])


def test_invalid_exponent():
    _, (hat0, _, _) = get_whitney_basis("circle", 0)
    with pytest.raises(ValueError):
        lp_norm(hat0, 0.5)
    with pytest.raises(ValueError):
        lp_norm(hat0, float("nan"))


def test_patch_norms():
    x, y = coordinates(2)
    one = PolyForm.function(2, 1)
    assert patch_lp_norm(one, 1) == pytest.approx(math.pi)
    assert patch_lp_norm(one, 1, domain="box") == pytest.approx(4.0)
    assert patch_lp_norm(one, 2, radius=0.5) == pytest.approx(math.sqrt(math.pi / 4))

    f = PolyForm.function(2, x)
    # |d x| = 1 on the unit disk
    assert patch_sobolev_norm(f, 2) == pytest.approx(math.sqrt(math.pi / 4 + math.pi))
    with pytest.raises(ValueError):
        patch_lp_norm(one, 2, domain="torus")


def test_patch_fields():
    x, y = coordinates(2)
    form = PolyForm.function(2, x**2 * y)
    field = as_patch_field(form)
    assert isinstance(field, PolyPatchField)
    assert as_patch_field(field) is field

    points = get_disk_points(20)
    exact = field.exterior_d().evaluate(points)
    np.testing.assert_allclose(patch_derivative(field, points), exact, atol=1e-6)
