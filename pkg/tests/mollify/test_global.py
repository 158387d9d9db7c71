import math

import numpy as np
import pytest
import sympy as sp
from derham_lab import SimplicialComplex
from derham_lab._errors import MissingChartError
from derham_lab.forms import lp_norm
from derham_lab.loaders import reference_complex
from derham_lab.mollify import (
    ConeChart,
    FiniteDifferenceField,
    PolarChart,
    complex_smoothness_samples,
    fit_star_kernel,
    global_regularize,
    order_dependence,
    star_chart,
)
from derham_lab.whitney import Cochain, whitney

from tests.test_utils import get_edge_form, get_whitney_basis


@pytest.fixture(scope="module")
def hat_regularization():
    _, (_, hat1, _) = get_whitney_basis("circle", 0)
    return hat1, global_regularize(hat1, eps=0.1, kernel_degree=6, quad_degree=8)


def test_global_regularize_hat(hat_regularization):
    _, result = hat_regularization
    assert result.order == [0, 1, 2]
    assert result.eps_schedule == {0: 0.1, 1: 0.1, 2: 0.1}
    assert result.homotopy is None
    assert result.homotopy_of_derivative is not None
    assert result.residual < 1e-4
    assert result.locality["holds"]
    assert result.norm_ratio == pytest.approx(1.0, abs=0.05)

    report = result.to_dict()
    assert report["eps_schedule"] == {"0": 0.1, "1": 0.1, "2": 0.1}
    assert report["p"] == 2.0


def test_regularized_hat_is_smooth(hat_regularization):
    _, result = hat_regularization
    samples = complex_smoothness_samples(result.regularized, quad_degree=4)
    assert len(samples["max_slope"]) == 3
    assert all(math.isfinite(s) for s in samples["max_slope"])
    assert samples["drift"] < 0.1


def test_global_regularize_one_form():
    K = reference_complex("circle")
    omega = get_edge_form(K, lambda e, x: 1 + x**2 if e == (0, 1) else sp.Integer(1))
    result = global_regularize(omega, eps=0.1, kernel_degree=6, quad_degree=8)
    assert result.homotopy is not None
    # top degree forms are closed
    assert result.homotopy_of_derivative is None
    assert result.commutation_defect == 0.0
    assert result.residual < 1e-4


def test_finite_difference_field():
    K = reference_complex("circle")
    hat = whitney(Cochain.indicator(K, (1,)))
    fd = FiniteDifferenceField(hat)
    assert fd.degree == 1
    points = np.array([[0.0], [0.5], [1.0]])
    np.testing.assert_allclose(fd.evaluate((0, 1), points), [[1.0]] * 3, atol=1e-8)
    np.testing.assert_allclose(fd.evaluate((1, 2), points), [[-1.0]] * 3, atol=1e-8)
    assert lp_norm(fd - hat.exterior_d()) < 1e-8


def test_fit_star_kernel_halves_wide_kernels():
    chart = star_chart(reference_complex("circle"), 0)
    kernel, shift = fit_star_kernel(chart, eps=1.0, kernel_degree=6)
    assert kernel.eps == sp.Rational(1, 8)
    assert shift < (1 - chart.inner_radius) / 2


def test_order_dependence():
    _, (hat0, _, _) = get_whitney_basis("circle", 0)
    report = order_dependence(hat0, eps=0.1, quad_degree=6, kernel_degree=4)
    assert report["orders"] == [[0, 1, 2], [2, 1, 0]]
    assert all(r < 1e-4 for r in report["residuals"])
    assert math.isfinite(report["difference"])


def test_missing_chart():
    # three triangles on one edge branch the link of vertex 0
    K = SimplicialComplex([(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    with pytest.raises(MissingChartError):
        global_regularize(whitney(Cochain.indicator(K, (0,))))


@pytest.mark.parametrize(
    "name,kernel_degree",
    [
        ("figure_eight", 4),
        ("edge_pair", 4),
        pytest.param("triangle", 0, marks=pytest.mark.slow),
        pytest.param("bowtie", 0, marks=pytest.mark.slow),
    ],
)
def test_global_regularize_on_cone_stars(name, kernel_degree):
    K = reference_complex(name)
    omega = whitney(Cochain(K, 0, list(range(len(K.vertices)))))
    result = global_regularize(omega, eps=0.05, kernel_degree=kernel_degree, quad_degree=6)
    assert isinstance(star_chart(K, 0), ConeChart)
    assert result.order == sorted(K.vertices)
    assert result.homotopy is None
    assert result.residual < 1e-4
    assert result.commutation_defect < 1e-3
    assert result.locality["holds"]


def test_global_regularize_one_form_on_the_figure_eight():
    K = reference_complex("figure_eight")
    omega = get_edge_form(K, lambda e, x: 1 + x if 0 in e else sp.Integer(2))
    result = global_regularize(omega, eps=0.1, kernel_degree=4, quad_degree=6)
    assert result.homotopy is not None
    assert result.homotopy_of_derivative is None
    assert result.residual < 1e-4
    assert result.locality["holds"]
    assert result.norm_ratio == pytest.approx(1.0, abs=0.1)


@pytest.mark.slow
@pytest.mark.timeout(900)
def test_global_regularize_on_the_sphere():
    K, hats = get_whitney_basis("sphere", 0)
    assert isinstance(star_chart(K, 0), PolarChart)
    result = global_regularize(hats[0], eps=0.1, kernel_degree=0, quad_degree=2)
    assert result.order == [0, 1, 2, 3]
    assert result.homotopy_of_derivative is not None
    assert result.residual < 1e-4
    assert result.locality["holds"]
    assert result.norm_ratio == pytest.approx(1.0, abs=0.1)
