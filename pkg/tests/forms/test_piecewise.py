import json

import numpy as np
import pytest
from derham_lab import SimplicialComplex
from derham_lab._errors import ComplexError, DegreeError, TraceMismatchError
from derham_lab.forms import (
    PiecewiseForm,
    PolyForm,
    barycentric_form,
    coordinates,
    face_embedding,
    field_trace,
    restrict_to_face,
    to_barycentric,
)
from derham_lab.loaders import reference_complex
from derham_lab.whitney import Cochain, whitney

from tests.test_utils import data_path, get_whitney_basis


def test_barycentric():
    assert barycentric_form(2, 0) == PolyForm.function(2, 1 - sum(coordinates(2)))
    rows = to_barycentric(np.array([[0.25, 0.5]]))
    np.testing.assert_allclose(rows, [[0.25, 0.25, 0.5]])


def test_face_embedding():
    A = face_embedding((1, 2), (0, 1, 2))
    # s -> (1 - s, s) in the chart of (0, 1, 2)
    assert A.matrix.tolist() == [[-1], [1]]
    assert list(A.offset) == [1, 0]
    with pytest.raises(ComplexError):
        face_embedding((0, 3), (0, 1, 2))


@pytest.mark.parametrize("name,k", [("circle", 0), ("circle", 1), ("triangle", 1), ("sphere", 1)])
def test_whitney_forms_are_compatible(name, k):
    _, forms = get_whitney_basis(name, k)
    for form in forms:
        assert form.trace_mismatch() == []
        form.check_compatible()


def test_incompatible_form():
    K = reference_complex("circle")
    (x,) = coordinates(1)
    omega = PiecewiseForm(K, 0, {(0, 1): PolyForm.function(1, x)})
    assert omega.trace_mismatch() == [((1,), (0, 1), (1, 2))]
    with pytest.raises(TraceMismatchError):
        omega.check_compatible()


def test_invalid_pieces():
    K = reference_complex("circle")
    with pytest.raises(ComplexError):
        PiecewiseForm(K, 1, {(0, 3): PolyForm.basis(1, (0,))})
    with pytest.raises(ComplexError):
        PiecewiseForm(K, 1, {(0, 1): PolyForm.basis(2, (0,))})
    with pytest.raises(DegreeError):
        PiecewiseForm(K, 1, {(0, 1): PolyForm.function(1, 1)})


def test_whitney_on_triangle():
    K = reference_complex("triangle")
    x1, x2 = coordinates(2)
    omega = whitney(Cochain.indicator(K, (0, 1)))
    assert omega.piece((0, 1, 2)) == PolyForm(2, 1, {(0,): 1 - x2, (1,): x1})
    assert omega.trace((0, 1)) == PolyForm.basis(1, (0,))
    assert omega.trace((1, 2)).is_zero()
    assert omega.exterior_d() == PiecewiseForm(
        K, 2, {(0, 1, 2): PolyForm.basis(2, (0, 1), 2)}
    )


def test_field_trace_matches_symbolic_trace():
    K = reference_complex("triangle")
    omega = whitney(Cochain.indicator(K, (0, 1)))
    s = np.linspace(0, 1, 5)[:, None]
    for face in [(0, 1), (0, 2), (1, 2)]:
        numeric = field_trace(omega, face, s)
        exact = omega.trace(face).evaluate(s)
        np.testing.assert_allclose(numeric, exact, atol=1e-14)


def test_algebra():
    K, (hat0, hat1, hat2) = get_whitney_basis("circle", 0)
    total = hat0 + hat1 + hat2
    (x,) = coordinates(1)
    for facet in K.facets:
        assert total.piece(facet) == PolyForm.function(1, 1)
    assert total.exterior_d().is_zero()
    assert (hat1 - hat1).is_zero()
    assert (2 * hat1).piece((0, 1)) == PolyForm.function(1, 2 * x)
    assert -hat1 == hat1 * -1

    _, edges = get_whitney_basis("circle", 1)
    product = hat1.wedge(edges[0])
    assert product.degree == 1
    assert product.piece((0, 1)) == PolyForm.basis(1, (0,), x)
    assert product.piece((1, 2)).is_zero()

    with pytest.raises(DegreeError):
        hat1 + edges[0]
    other = reference_complex("triangle")
    with pytest.raises(ComplexError):
        hat1 + PiecewiseForm.zero(other, 0)


def test_restrictions():
    K = reference_complex("triangle")
    omega = whitney(Cochain.indicator(K, (0, 1)))
    edge = restrict_to_face(omega, (0, 1))
    assert edge.complex == SimplicialComplex([(0, 1)])
    assert edge.piece((0, 1)) == PolyForm.basis(1, (0,))

    boundary = omega.restrict_to_subcomplex(K.skeleton(1))
    assert boundary.piece((0, 1)) == PolyForm.basis(1, (0,))
    assert boundary.piece((0, 2)).is_zero()
    boundary.check_compatible()


def test_poly_degree_and_quadrature_degree():
    _, (_, hat1, _) = get_whitney_basis("circle", 0)
    assert hat1.poly_degree() == 1
    assert hat1.default_quadrature_degree == 4


def test_serialization():
    K, (_, hat1, _) = get_whitney_basis("circle", 0)
    with open(data_path("circle_hat.json")) as f:
        data = json.load(f)
    assert PiecewiseForm.from_dict(data, K) == hat1
    assert PiecewiseForm.from_dict(hat1.to_dict(), K) == hat1
    assert hat1.to_dict()["pieces"]["0-1"] == {"1": "x1"}
