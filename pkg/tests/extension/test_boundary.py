import math

import numpy as np
import pytest
from derham_lab._errors import ComplexError
from derham_lab.extension import (
    BoundaryExtension,
    collar_lipschitz,
    extend_from_boundary,
    extension_norm_report,
)
from derham_lab.forms import PiecewiseForm, lp_norm

from tests.test_utils import get_whitney_basis


@pytest.fixture(scope="module")
def hat_extension():
    _, hats = get_whitney_basis("circle", 0)
    return hats[1], extend_from_boundary(hats[1])


def test_extension_values(hat_extension):
    _, extension = hat_extension
    assert isinstance(extension, BoundaryExtension)
    assert extension.simplex == (0, 1, 2)
    values = extension.evaluate((0, 1, 2), np.array([[0.5, 0.0], [1.0, 0.0], [1 / 3, 1 / 3]]))
    # midpoint of (0, 1), the vertex 1 and the barycenter
    np.testing.assert_allclose(values[:, 0], [0.5, 1.0, 0.0], atol=1e-12)


def test_collar_quadrature(hat_extension):
    _, extension = hat_extension
    _, points, weights = next(extension.quadrature(6))
    assert points.shape == (len(weights), 2)
    # area of the collar between the inner copy and the boundary
    assert weights.sum() == pytest.approx(0.75 * math.sqrt(3) / 4)


def test_derivative(hat_extension):
    _, extension = hat_extension
    d_ext = extension.exterior_d()
    assert d_ext.degree == 1
    assert d_ext.exterior_d().is_zero()
    assert np.isfinite(lp_norm(d_ext, 2.0))


def test_norm_report(hat_extension):
    hat, extension = hat_extension
    report = extension_norm_report(hat, extension, 2.0)
    assert report["lp_input"] == pytest.approx(math.sqrt(2 / 3))
    assert 0 < report["lp_ratio"] < math.inf
    assert {"lp_holds", "sobolev_holds", "sobolev_ratio"} <= set(report)


def test_boundary_errors():
    K, hats = get_whitney_basis("triangle", 0)
    with pytest.raises(ComplexError):
        extend_from_boundary(hats[0])
    _, circle_hats = get_whitney_basis("circle", 0)
    with pytest.raises(ValueError):
        extend_from_boundary(circle_hats[0], inner_scale=1.5)
    with pytest.raises(ComplexError):
        extend_from_boundary(PiecewiseForm.zero(K, 0))


def test_collar_lipschitz():
    lower, upper = collar_lipschitz(2)
    assert 0 < lower <= upper < math.inf
    thin_lower, _ = collar_lipschitz(2, inner_scale=0.9)
    assert thin_lower < lower
