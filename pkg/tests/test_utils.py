import os

import numpy as np
import sympy as sp
from derham_lab._random import make_rng, random_polyform
from derham_lab.forms import PiecewiseForm, PolyForm, coordinates
from derham_lab.loaders import reference_complex
from derham_lab.whitney import Cochain, whitney

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def data_path(name):
    return os.path.join(DATA_DIR, name)


def get_whitney_basis(name, k):
    """Whitney forms of every indicator cochain of degree k on a reference complex."""
    K = reference_complex(name)
    return K, [whitney(Cochain.indicator(K, sigma)) for sigma in K.simplices[k]]


def get_random_cochain(K, k, seed=0):
    rng = make_rng(seed)
    values = [
        sp.Rational(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in K.simplices[k]
    ]
    return Cochain(K, k, values)


def get_random_polyforms(dim, degree, count=5, max_poly_degree=3, seed=0):
    rng = make_rng(seed)
    return [random_polyform(rng, dim, degree, max_poly_degree) for _ in range(count)]


def get_edge_form(K, make):
    """A 1-form on a graph with piece ``make(edge) dx1`` on every edge."""
    (x,) = coordinates(1)
    return PiecewiseForm(K, 1, {e: PolyForm.basis(1, (0,), make(e, x)) for e in K.facets})


def get_disk_points(n=50, radius=0.9, seed=0):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(n))
    theta = 2 * np.pi * rng.random(n)
    return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=1)
