import numpy as np
import pytest
from derham_lab._errors import ComplexError, TraceMismatchError
from derham_lab.extension import SkeletonExtension, extend_from_skeleton
from derham_lab.forms import PiecewiseForm, PolyForm, coordinates
from derham_lab.loaders import reference_complex

from tests.test_utils import get_whitney_basis


def test_fill_the_triangle():
    _, hats = get_whitney_basis("circle", 0)
    triangle = reference_complex("triangle")
    extension = extend_from_skeleton(hats[1], triangle)
    assert isinstance(extension, SkeletonExtension)
    assert list(extension.fields) == [(0, 1, 2)]
    assert [step["dimension"] for step in extension.steps] == [2]
    values = extension.evaluate((0, 1, 2), np.array([[1.0, 0.0], [0.0, 1.0]]))
    np.testing.assert_allclose(values[:, 0], [1.0, 0.0], atol=1e-12)


def test_fill_from_the_vertices():
    triangle = reference_complex("triangle")
    vertices = triangle.skeleton(0)
    omega = PiecewiseForm(
        vertices, 0, {(v,): PolyForm.function(0, v + 1) for v in vertices.vertices}
    )
    extension = extend_from_skeleton(omega, triangle, report=False)
    assert extension.steps == []
    assert extension.degree == 0


def test_step_report():
    _, hats = get_whitney_basis("circle", 0)
    extension = extend_from_skeleton(hats[0], reference_complex("triangle"), p=2.0)
    (step,) = extension.steps
    assert step["lp_input"] == pytest.approx(np.sqrt(2 / 3))
    assert step["lp_output"] > 0
    assert {"sobolev_input", "sobolev_output", "lp_holds", "sobolev_holds"} <= set(step)


def test_skeleton_errors():
    _, hats = get_whitney_basis("circle", 0)
    with pytest.raises(ComplexError):
        extend_from_skeleton(hats[0], reference_complex("sphere"))

    (x,) = coordinates(1)
    circle = reference_complex("circle")
    one_sided = PiecewiseForm(circle, 0, {(0, 1): PolyForm.function(1, x)})
    with pytest.raises(TraceMismatchError):
        extend_from_skeleton(one_sided, reference_complex("triangle"))
