import json
import math

import pytest
import sympy as sp
from derham_lab import SimplicialComplex
from derham_lab._errors import DegreeError
from derham_lab.forms import PiecewiseForm, PolyForm
from derham_lab.loaders import reference_complex
from derham_lab.whitney import (
    Cochain,
    derham_map,
    derham_map_bound,
    projector_defect,
    reference_derham_map,
    whitney,
    whitney_basis_piece,
    whitney_is_chain_map_check,
    whitney_norm_bound,
    whitney_normalized,
    whitney_projector,
)

from tests.test_utils import data_path, get_random_cochain, get_whitney_basis


def test_basis_piece_off_the_star():
    assert whitney_basis_piece((0, 3), (0, 1, 2)) == PolyForm.zero(2, 1)
    # t_0 on the chart of (0, 1, 2)
    x1, x2 = sp.symbols("x1 x2")
    assert whitney_basis_piece((0,), (0, 1, 2)) == PolyForm.function(2, 1 - x1 - x2)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_integral_of_a_basis_form(k):
    K = SimplicialComplex([range(k + 1)])
    sigma = K.simplices[k][0]
    omega = whitney(Cochain.indicator(K, sigma))
    value = derham_map(omega).values[0]
    assert float(value) == pytest.approx(math.sqrt(k + 1) / math.sqrt(2**k))
    assert reference_derham_map(omega).values == [1]


@pytest.mark.parametrize("name", ["circle", "sphere", "torus7"])
def test_whitney_is_a_chain_map(name):
    K = reference_complex(name)
    for k in range(K.dim + 1):
        c = get_random_cochain(K, k, seed=k)
        assert whitney_is_chain_map_check(c).is_zero()


@pytest.mark.parametrize("name", ["circle", "sphere"])
def test_derham_map_inverts_whitney(name):
    K = reference_complex(name)
    for k in range(K.dim + 1):
        c = get_random_cochain(K, k, seed=10 + k)
        assert reference_derham_map(whitney(c)) == c
        assert derham_map(whitney_normalized(c)).max_abs_difference(c) < 1e-12


def test_derham_map_of_a_file_form():
    K = reference_complex("circle")
    with open(data_path("circle_form.json")) as f:
        omega = PiecewiseForm.from_dict(json.load(f), K)
    assert derham_map(omega).values == pytest.approx([1.0, 0.0, 0.5])
    assert reference_derham_map(omega) == Cochain(K, 1, [1, 0, sp.Rational(1, 2)])
    assert derham_map(omega, quad_degree=6).values == pytest.approx([1.0, 0.0, 0.5])


def test_derham_map_errors():
    _, forms = get_whitney_basis("circle", 1)
    with pytest.raises(DegreeError):
        derham_map(forms[0], k=0)
    with pytest.raises(TypeError):
        derham_map(forms[0].piece((0, 1)))


def test_projector():
    _, forms = get_whitney_basis("triangle", 1)
    omega = forms[0] * 2 + forms[2]
    projected = whitney_projector(omega)
    assert derham_map(projected).max_abs_difference(derham_map(omega)) < 1e-12
    assert projector_defect(omega) < 1e-12


@pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
def test_derham_map_bound(p):
    _, forms = get_whitney_basis("sphere", 1)
    report = derham_map_bound(forms[0] + forms[3] * 2, p)
    assert report["degree"] == 1
    assert report["holds"]


@pytest.mark.parametrize("name,k", [("circle", 0), ("circle", 1), ("sphere", 1)])
def test_whitney_norm_bound(name, k):
    K = reference_complex(name)
    report = whitney_norm_bound(get_random_cochain(K, k, seed=7), p=2.0)
    assert report["holds"]
    assert report["N"] == (2 if k < K.dim else 1)
    with pytest.raises(ValueError):
        whitney_norm_bound(get_random_cochain(K, k), p=math.inf)
