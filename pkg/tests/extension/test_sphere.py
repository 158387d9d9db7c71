import math

import numpy as np
import pytest
from derham_lab._errors import DegreeError, SupportError
from derham_lab.extension import CircleField, extend_by_zero_sphere, sphere_extension_report
from derham_lab.forms import PolyForm, coordinates


@pytest.fixture(scope="module")
def unit_arc():
    return extend_by_zero_sphere((0.0, 1.0), PolyForm.basis(1, (0,), 1))


def test_values(unit_arc):
    assert isinstance(unit_arc, CircleField)
    assert unit_arc.moved_arc == pytest.approx((math.pi, math.pi + 1))
    u = np.array([0.5, 2.0, math.pi + 0.5, 5.0])
    np.testing.assert_allclose(unit_arc.evaluate(u)[:, 0], [1.0, 0.0, 0.0, 0.0], atol=1e-14)
    np.testing.assert_allclose(unit_arc.moved_form(u)[:, 0], [1.0, 0.0, 1.0, 0.0])
    assert unit_arc.exterior_d().is_zero()


def test_bump(unit_arc):
    u = np.array([0.5, (1 + math.pi) / 2, math.pi + 0.5, 2 * math.pi - 0.01])
    np.testing.assert_allclose(unit_arc.bump(u)[:3], [1.0, 0.5, 0.0])
    assert 0 < unit_arc.bump(u)[3] < 1


def test_norms(unit_arc):
    assert unit_arc.integral() == pytest.approx(1.0)
    assert unit_arc.lp_norm(2.0) == pytest.approx(1.0)
    assert unit_arc.lp_norm(math.inf) == pytest.approx(1.0)
    assert unit_arc.support_defect() == 0.0
    report = sphere_extension_report(unit_arc)
    assert report["lp_input"] == pytest.approx(report["lp_output"])
    assert report["closed"]
    assert report["holds"]


def test_arc_across_zero():
    (s,) = coordinates(1)
    field = extend_by_zero_sphere((6.0, 6.5), PolyForm.basis(1, (0,), s))
    assert field.evaluate(np.array([0.1]))[0, 0] > 0
    assert field.integral() == pytest.approx(0.5)


@pytest.mark.parametrize("arc", [(0.0, 4.0), (1.0, 1.0), (2.0, 1.0)])
def test_bad_arcs(arc):
    with pytest.raises(SupportError):
        extend_by_zero_sphere(arc, PolyForm.basis(1, (0,), 1))


def test_not_top_degree():
    with pytest.raises(DegreeError):
        extend_by_zero_sphere((0.0, 1.0), PolyForm.function(1, 1))
