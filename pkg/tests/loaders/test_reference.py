import pytest
from derham_lab.loaders import REFERENCE_NAMES, reference_complex

COUNTS = {
    "triangle": (3, 3, 1),
    "circle": (3, 3),
    "sphere": (4, 6, 4),
    "torus7": (7, 21, 14),
    "two_triangles": (6, 6, 2),
    "bowtie": (5, 6, 2),
    "figure_eight": (5, 6),
    "edge_pair": (4, 2),
}


@pytest.mark.parametrize("name", REFERENCE_NAMES)
def test_reference_complexes(name):
    K = reference_complex(name)
    assert K.name == name
    assert K.counts() == COUNTS[name]
    assert K.is_pure


def test_torus_edges_on_two_triangles():
    K = reference_complex("torus7")
    assert all(len(K.facets_containing(edge)) == 2 for edge in K.simplices[1])
    assert K.euler_characteristic() == 0


def test_unknown_name():
    with pytest.raises(KeyError):
        reference_complex("klein")
