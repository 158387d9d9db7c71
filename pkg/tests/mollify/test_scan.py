import numpy as np
import pytest
from derham_lab._errors import SupportError
from derham_lab.mollify import (
    default_sample_forms,
    make_kernel,
    mollify_scalar,
    operator_norm_scan,
    scalar_convergence,
    scan_trends,
    sup_bound_check,
)


def test_mollify_scalar():
    points = np.linspace(-1, 1, 5)[:, None]
    values = mollify_scalar(lambda p: p[:, 0] ** 2, make_kernel(1, eps=0.1), points)
    np.testing.assert_allclose(values, points[:, 0] ** 2 + 0.01 / 7)


def test_scalar_convergence_of_a_kink():
    points = np.linspace(-0.5, 0.5, 11)[:, None]
    table = scalar_convergence(lambda p: np.abs(p[:, 0]), points, eps_values=(0.4, 0.2, 0.1))
    assert table.columns.tolist() == ["eps", "sup_distance"]
    # the worst point is the kink, where |x| * f_eps = eps int |v| f
    np.testing.assert_allclose(table["sup_distance"], table["eps"] * 5 / 16)


def test_default_sample_forms():
    forms = default_sample_forms()
    assert len(forms) == 30
    assert {f.dim for f in forms} == {2}


def test_operator_norm_scan():
    forms = default_sample_forms()[:8]
    table = operator_norm_scan((0.4, 0.2, 0.1), forms=forms)
    assert table.columns.tolist() == ["eps", "C_hat", "M_hat"]
    assert table.iloc[-1].tolist() == [0.0, 1.0, 0.0]
    assert (table["C_hat"] >= 1 - 1e-12).all()

    trends = scan_trends(table)
    assert trends["C_nonincreasing"]
    assert trends["M_nonincreasing"]
    assert trends["holds"]

    with pytest.raises(ValueError):
        operator_norm_scan((0.1,), forms=[])


def test_sup_bound_check():
    report = sup_bound_check(forms=default_sample_forms()[:6], eps=0.1)
    assert report["eps"] == pytest.approx(0.1)
    assert len(report["cases"]) == 6
    assert report["holds"]

    with pytest.raises(SupportError):
        sup_bound_check(forms=default_sample_forms()[:1], eps=0.8)
