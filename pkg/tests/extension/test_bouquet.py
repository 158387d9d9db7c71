import math

import numpy as np
import pytest
from derham_lab._errors import BouquetError
from derham_lab.extension import (
    Bouquet,
    BouquetExtension,
    bouquet_norm_report,
    extend_bouquet,
)
from derham_lab.forms import PolyForm, coordinates

(z,) = coordinates(1)
ANGLES = (0.0, math.pi / 2)


def test_rays():
    bouquet = Bouquet(ANGLES, (PolyForm.function(1, 1 + z), PolyForm.function(1, 1 - z)))
    assert bouquet.size == 2
    assert bouquet.degree == 0
    rays = bouquet.rays()
    assert [a for a, _, _ in rays] == pytest.approx([0.0, math.pi / 2, math.pi, 3 * math.pi / 2])
    assert [(j, s) for _, j, s in rays] == [(0, 1), (1, 1), (0, -1), (1, -1)]
    # the ray at pi runs along z = -r
    assert bouquet.ray_form(2) == PolyForm.function(1, 1 - z)
    np.testing.assert_allclose(bouquet.ray_points(1, np.array([0.5])), [[0.0, 0.5]], atol=1e-15)


def test_function_extension():
    leaf = PolyForm.function(1, 1 - z**2)
    extension = extend_bouquet(angles=ANGLES, leaves=(leaf, leaf))
    assert isinstance(extension, BouquetExtension)
    c = math.cos(math.pi / 4)
    points = np.array([[0.5, 0.0], [0.0, -0.5], [0.5 * c, 0.5 * c], [0.0, 0.0]])
    np.testing.assert_allclose(extension.evaluate(points)[:, 0], [0.75, 0.75, 0.0, 1.0], atol=1e-12)


def test_one_form_extension():
    leaf = PolyForm.basis(1, (0,), 1)
    extension = extend_bouquet(Bouquet((0.0,), (leaf,)))
    # on the ray at 0 the extension is dr = dx
    np.testing.assert_allclose(extension.evaluate(np.array([[0.5, 0.0]])), [[1.0, 0.0]])
    assert extension.exterior_d().degree == 2


def test_norm_report():
    leaf = PolyForm.function(1, 1 - z**2)
    report = bouquet_norm_report(extend_bouquet(angles=ANGLES, leaves=(leaf, leaf)), p=2.0)
    assert report["model_lp_factor"] == pytest.approx(2 / 3)
    assert report["exact_model_lp_factor"] == pytest.approx(2 / 3)
    assert report["rays_hold"]
    assert report["holds"]
    assert report["disk_lp"] > 0
    # a nonzero center value puts a 1/r term into d of the extension
    assert report["disk_d_lp"] == math.inf


def test_norm_report_vanishing_center():
    leaf = PolyForm.function(1, z**2)
    report = bouquet_norm_report(extend_bouquet(angles=ANGLES, leaves=(leaf, leaf)), p=2.0)
    assert report["holds"]
    assert np.isfinite(report["disk_d_lp"])
    with pytest.raises(ValueError):
        bouquet_norm_report(extend_bouquet(angles=ANGLES, leaves=(leaf, leaf)), p=math.inf)


def test_half_leaves():
    left, right = PolyForm.function(1, 1 + z), PolyForm.function(1, 1 - 2 * z)
    bouquet = Bouquet((0.0,), ((left, right),))
    extension = extend_bouquet(bouquet)
    values = extension.evaluate(np.array([[0.25, 0.0], [-0.25, 0.0]]))[:, 0]
    np.testing.assert_allclose(values, [0.5, 0.75])


@pytest.mark.parametrize(
    "angles,leaves",
    [
        ((0.0, 0.0), (PolyForm.function(1, 1),) * 2),
        ((math.pi,), (PolyForm.function(1, 1),)),
        ((0.0, 1.0), (PolyForm.function(1, 1),)),
        ((0.0, 1.0), (PolyForm.function(1, 1), PolyForm.function(1, 2))),
        ((0.0, 1.0), (PolyForm.function(1, 1), PolyForm.basis(1, (0,), 1))),
        ((0.0,), ("not a form",)),
    ],
)
def test_invalid_bouquets(angles, leaves):
    with pytest.raises(BouquetError):
        Bouquet(angles, leaves)


def test_extend_bouquet_errors():
    with pytest.raises(BouquetError):
        extend_bouquet()
    with pytest.raises(TypeError):
        extend_bouquet("bouquet")
