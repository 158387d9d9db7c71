import numpy as np
import pytest
import sympy as sp
from derham_lab._errors import DegreeError, DimensionMismatchError
from derham_lab.forms import (
    AffineMap,
    PolyForm,
    VectorFieldPoly,
    compound_matrix,
    coordinates,
    exterior_d,
    integrate_parameter,
    interior_product,
    lie_derivative,
    pull_coefficients,
    pullback,
    wedge,
)

from tests.test_utils import get_random_polyforms


def test_basis_signs():
    assert PolyForm.basis(2, (1, 0)) == -PolyForm.basis(2, (0, 1))
    assert PolyForm.basis(3, (2, 0, 1)) == PolyForm.basis(3, (0, 1, 2))
    assert PolyForm.basis(2, (1, 1)).is_zero()


def test_invalid_forms():
    with pytest.raises(DegreeError):
        PolyForm(2, 1, {(0, 1): 1})
    with pytest.raises(DegreeError):
        PolyForm(2, 2, {(1, 0): 1})
    with pytest.raises(DimensionMismatchError):
        PolyForm(2, 1, {(2,): 1})
    with pytest.raises(DegreeError):
        PolyForm(1, 1) + PolyForm(1, 0)
    with pytest.raises(DegreeError):
        PolyForm(2, -2)
    with pytest.raises(DegreeError):
        PolyForm(2, -1, {(): 1})
    with pytest.raises(DimensionMismatchError):
        wedge(PolyForm.basis(1, (0,)), PolyForm.basis(2, (0,)))


def test_arithmetic():
    x, y = coordinates(2)
    a = PolyForm.basis(2, (0,), x * y)
    b = PolyForm.basis(2, (1,), 1)
    assert a + b - b == a
    assert (a * 2).coefficient((0,)) == 2 * x * y
    assert a * b == PolyForm.basis(2, (0, 1), x * y)
    assert b * a == -(a * b)
    assert a.subs({x: 1}).coefficient((0,)) == y
    assert (a + b).coefficients() == [x * y, 1]
    assert a.poly_degree() == 2
    assert PolyForm.zero(2, 1) == PolyForm.zero(2, 3)


@pytest.mark.parametrize("dim", [1, 2, 3, 4])
def test_d_squared(dim):
    for k in range(dim + 1):
        for omega in get_random_polyforms(dim, k, count=3, seed=dim + k):
            assert exterior_d(exterior_d(omega)).is_zero()


def test_leibniz():
    for p, q in [(0, 1), (1, 1), (1, 2)]:
        a = get_random_polyforms(3, p, count=1, seed=p)[0]
        b = get_random_polyforms(3, q, count=1, seed=10 + q)[0]
        lhs = exterior_d(wedge(a, b))
        rhs = wedge(exterior_d(a), b) + wedge(a, exterior_d(b)) * (-1) ** p
        assert lhs == rhs


def test_interior_and_lie():
    x, y = coordinates(2)
    area = PolyForm.basis(2, (0, 1))
    assert interior_product(VectorFieldPoly.partial(2, 0), area) == PolyForm.basis(2, (1,))
    assert interior_product(VectorFieldPoly.partial(2, 1), area) == -PolyForm.basis(2, (0,))
    with pytest.raises(DegreeError):
        interior_product(VectorFieldPoly.partial(2, 0), PolyForm.function(2, x))
    with pytest.raises(DimensionMismatchError):
        interior_product(VectorFieldPoly.partial(3, 0), area)

    omega = PolyForm.basis(2, (1,), x)
    assert lie_derivative(VectorFieldPoly.partial(2, 0), omega) == PolyForm.basis(2, (1,))
    # the scaling field scales a k-form of polynomial degree m by k + m
    euler = VectorFieldPoly.linear([[1, 0], [0, 1]])
    assert lie_derivative(euler, PolyForm.basis(2, (0, 1), x)) == PolyForm.basis(2, (0, 1), 3 * x)
    assert euler.is_affine()
    A, b = euler.affine_parts()
    assert A == sp.eye(2)
    assert b == sp.zeros(2, 1)


def test_pullback():
    u, v = coordinates(2)
    (x,) = coordinates(1)
    A = AffineMap([[2, 1]], [3])
    assert pullback(A, PolyForm.basis(1, (0,))) == PolyForm(2, 1, {(0,): 2, (1,): 1})
    assert pullback(A, PolyForm.function(1, x**2)) == PolyForm.function(2, (2 * u + v + 3) ** 2)

    B = AffineMap([[1, 2, 0], [0, 1, -1], [1, 0, 1]], [1, 0, 2])
    for k in range(3):
        for omega in get_random_polyforms(3, k, count=2, seed=k):
            assert pullback(B, exterior_d(omega)) == exterior_d(pullback(B, omega))

    with pytest.raises(DimensionMismatchError):
        pullback(A, PolyForm.basis(2, (0,)))
    with pytest.raises(DimensionMismatchError):
        A.compose(AffineMap.identity(3))
    assert A.compose(AffineMap.translation([1, 1]))([0, 0]) == [6]


def test_numeric_pullback_matches_exact():
    B = AffineMap([[1, 2, 0], [0, 1, -1], [1, 0, 1]])
    J = np.array(B.matrix.tolist(), dtype=float)
    points = np.random.default_rng(0).random((7, 3))
    for k in range(4):
        omega = get_random_polyforms(3, k, count=1, seed=k)[0]
        exact = pullback(B, omega).evaluate(points)
        images = points @ J.T
        numeric = pull_coefficients(np.repeat(J[None], 7, axis=0), omega.evaluate(images), k)
        np.testing.assert_allclose(numeric, exact, atol=1e-10)
    assert compound_matrix(J, 3)[0, 0] == pytest.approx(np.linalg.det(J))
    assert compound_matrix(J, 0).shape == (1, 1)


def test_evaluate():
    x, y = coordinates(2)
    omega = PolyForm(2, 1, {(0,): x * y, (1,): 2})
    np.testing.assert_allclose(omega.evaluate(np.array([[2.0, 3.0], [0.0, 1.0]])), [[6, 2], [0, 2]])
    t = sp.Symbol("t")
    with pytest.raises(ValueError):
        PolyForm.function(2, t * x).evaluate(np.zeros((1, 2)))


def test_serialization():
    x, y = coordinates(2)
    omega = PolyForm(2, 1, {(0,): x * y / 3, (1,): 2})
    data = omega.to_dict()
    assert data["terms"] == {"dx1": "x1*x2/3", "dx2": "2"}
    assert PolyForm.from_dict(data) == omega
    assert str(PolyForm.zero(2, 1)) == "0"


def test_integrate_parameter():
    t = sp.Symbol("t")
    (x,) = coordinates(1)
    omega = PolyForm.basis(1, (0,), t * x + 1)
    assert integrate_parameter(omega, t) == PolyForm.basis(1, (0,), x / 2 + 1)


def test_zero_form_of_degree_minus_one():
    below = PolyForm.zero(2, -1)
    assert below.is_zero()
    assert below.coefficients() == []
    assert below.evaluate(np.zeros((3, 2))).shape == (3, 0)
    assert exterior_d(below) == PolyForm.zero(2, 0)
