import math

import pytest
from derham_lab._errors import BouquetError, ComplexError
from derham_lab.loaders import reference_complex
from derham_lab.mollify import BouquetChart, LineChart, bouquet_star_regularize
from derham_lab.whitney import Cochain, whitney


def test_degree_two_vertex_uses_the_line_chart():
    K = reference_complex("figure_eight")
    hat = whitney(Cochain.indicator(K, (1,)))
    result = bouquet_star_regularize(K, 1, hat, eps=0.1, kernel_degree=6, quad_degree=8)
    assert isinstance(result.chart, LineChart)
    assert result.eps == pytest.approx(0.1)
    assert result.homotopy is None
    assert result.residual < 1e-6


def test_degree_four_vertex():
    K = reference_complex("figure_eight")
    omega = whitney(Cochain.indicator(K, (0, 1)))
    result = bouquet_star_regularize(K, 0, omega, eps=0.1, kernel_degree=6, quad_degree=8)
    assert isinstance(result.chart, BouquetChart)
    assert result.homotopy is not None
    assert math.isfinite(result.residual)
    assert result.to_dict() == {
        "vertex": 0,
        "chart": "BouquetChart",
        "eps": result.eps,
        "p": 2.0,
        "residual": result.residual,
    }


def test_invalid_stars():
    sphere = reference_complex("sphere")
    form = whitney(Cochain.indicator(sphere, (0,)))
    with pytest.raises(BouquetError):
        bouquet_star_regularize(sphere, 0, form)

    K = reference_complex("figure_eight")
    with pytest.raises(ComplexError):
        bouquet_star_regularize(K, 0, whitney(Cochain.indicator(reference_complex("circle"), (0,))))
