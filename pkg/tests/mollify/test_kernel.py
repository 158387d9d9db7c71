import math

import numpy as np
import pytest
import sympy as sp
from derham_lab.mollify import KernelProfile, ball_volume, make_kernel


def test_make_kernel():
    kernel = make_kernel(1, "polynomial", 0.1)
    assert kernel.eps == sp.Rational(1, 10)
    assert kernel.profile is KernelProfile.POLYNOMIAL
    assert kernel.exact
    assert make_kernel(2, eps=sp.Rational(1, 4)).eps == sp.Rational(1, 4)


@pytest.mark.parametrize("eps", [0, -0.5])
def test_invalid_width(eps):
    with pytest.raises(ValueError):
        make_kernel(1, eps=eps)


def test_invalid_profile():
    with pytest.raises(ValueError):
        make_kernel(1, "gaussian")
    with pytest.raises(ValueError):
        make_kernel(0)


def test_polynomial_moments():
    kernel = make_kernel(1)
    assert kernel.moment((0,)) == 1
    assert kernel.moment((1,)) == 0
    assert kernel.moment((2,)) == sp.Rational(1, 7)
    assert kernel.abs_moment(1) == sp.Rational(5, 16)
    assert make_kernel(2).moment((2, 2)) == sp.Rational(1, 49)
    with pytest.raises(ValueError):
        kernel.moment((2, 0))
    with pytest.raises(ValueError):
        make_kernel(2).abs_moment()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_smooth_kernel_is_normalized(n):
    kernel = make_kernel(n, "smooth", 0.2)
    assert not kernel.exact
    assert float(kernel.moment((0,) * n)) == pytest.approx(1.0)
    assert kernel.moment((1,) + (0,) * (n - 1)) == 0.0
    _, weights = kernel.nodes(8)
    assert weights.sum() == pytest.approx(1.0)


def test_nodes_reproduce_moments():
    kernel = make_kernel(2)
    v, w = kernel.nodes(10)
    assert float(v[:, 0] ** 2 @ w) == pytest.approx(1 / 7)
    assert float(v[:, 0] ** 2 * v[:, 1] ** 2 @ w) == pytest.approx(1 / 49)


def test_support_data():
    kernel = make_kernel(2, eps=0.5)
    assert kernel.sup == pytest.approx((15 / 16) ** 2)
    assert kernel.scaled_sup == pytest.approx((15 / 16) ** 2 / 0.25)
    assert kernel.support_measure == pytest.approx(1.0)
    assert kernel.reach == pytest.approx(0.5 * math.sqrt(2))

    smooth = make_kernel(2, "smooth", 0.5)
    assert smooth.support_measure == pytest.approx(math.pi / 4)
    assert smooth.reach == pytest.approx(0.5)
    # the scaled kernel vanishes outside its support
    assert smooth.scaled_density(np.array([[0.6, 0.0]]))[0] == 0.0


def test_ball_volume():
    assert ball_volume(2) == pytest.approx(math.pi)
    assert ball_volume(3, 2.0) == pytest.approx(32 * math.pi / 3)


def test_exact_degree_of_the_kernel_rule():
    kernel = make_kernel(1)
    assert kernel.exact_degree(10) == 11
    assert kernel.exact_degree(4) == 5
    assert kernel.exact_degree(1) == 1
    v, w = kernel.nodes(4)
    assert float(v[:, 0] ** 4 @ w) == pytest.approx(1 / 21, abs=1e-14)
    assert make_kernel(2, "smooth").exact_degree(10) is None
