import json

import pytest
import sympy as sp
from derham_lab._errors import ComplexError
from derham_lab.loaders import dump_json, load_cochain, load_complex, load_form, reference_complex

from tests.test_utils import data_path


def test_load_complex():
    K = load_complex(data_path("circle.json"))
    assert K == reference_complex("circle")
    # file stem as the default name
    assert K.name == "circle"

    stretched = load_complex(data_path("stretched_triangle.json"))
    assert stretched.name == "stretched"
    assert stretched.L == 2.0
    assert stretched.edge_length[(0, 1)] == 2.0
    assert stretched.edge_length[(0, 2)] == 1.0


def test_load_torus():
    assert load_complex(data_path("torus7.json")) == reference_complex("torus7")


def test_load_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_complex(data_path("missing.json"))
    with pytest.raises(ComplexError):
        load_complex(data_path("malformed.json"))
    path = tmp_path / "list.json"
    path.write_text("[[0, 1]]")
    with pytest.raises(ComplexError):
        load_complex(path)


def test_load_form_and_cochain():
    K = load_complex(data_path("circle.json"))
    form = load_form(data_path("circle_form.json"), K)
    assert form.degree == 1
    assert set(form.pieces) == {(0, 1), (1, 2)}
    cochain = load_cochain(data_path("circle_edge_cochain.json"), K)
    assert cochain.values == [1, 0, sp.Rational(1, 2)]


def test_dump_json(tmp_path):
    data = {"b": [1, 2], "a": {"y": 1.5, "x": None}}
    text = dump_json(data)
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == data

    path = tmp_path / "report.json"
    assert dump_json(data, path) == text
    assert path.read_text() == text + "\n"
