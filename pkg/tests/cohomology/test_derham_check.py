import pytest
from derham_lab import SimplicialComplex
from derham_lab.cohomology import derham_iso_check
from derham_lab.loaders import reference_complex


def test_circle_with_regularization():
    report = derham_iso_check(
        reference_complex("circle"), eps=0.1, quad_degree=8, kernel_degree=6
    )
    assert report["holds"]
    assert report["betti"] == [1, 1]
    assert report["regularization_checked"]
    degree_one = report["degrees"][1]
    assert degree_one["dims_agree"]
    assert degree_one["pairing_rank"] == degree_one["pairing_expected"] == 3
    assert degree_one["regularization"]["holds"]
    assert degree_one["regularization"]["locality"]


def test_sphere_skips_regularization_by_default():
    report = derham_iso_check(reference_complex("sphere"))
    assert report["holds"]
    assert report["betti"] == [1, 0, 1]
    assert not report["regularization_checked"]
    assert all(entry["regularization"] is None for entry in report["degrees"])
    assert [entry["pairing_nonsingular"] for entry in report["degrees"]] == [True] * 3


def test_figure_eight_with_regularization():
    # the wedge point of the figure eight has a star of degree four
    report = derham_iso_check(
        reference_complex("figure_eight"), eps=0.1, quad_degree=4, kernel_degree=2
    )
    assert report["holds"]
    assert report["betti"] == [1, 2]
    assert report["regularization_checked"]
    degree_one = report["degrees"][1]
    assert len(degree_one["regularization"]["residuals"]) == 2
    assert degree_one["regularization"]["holds"]


def test_triangle_with_regularization():
    report = derham_iso_check(
        reference_complex("triangle"),
        eps=0.1,
        quad_degree=4,
        kernel_degree=0,
        regularize_max_dim=2,
    )
    assert report["holds"]
    assert report["regularization_checked"]
    assert report["degrees"][0]["regularization"]["holds"]


def test_missing_chart_skips_regularization():
    # three triangles on one edge branch the link of vertex 0
    K = SimplicialComplex([(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    report = derham_iso_check(K, quad_degree=2, kernel_degree=0, regularize_max_dim=2)
    assert report["holds"]
    assert report["betti"] == [1, 0, 0]
    assert not report["regularization_checked"]


@pytest.mark.slow
@pytest.mark.timeout(1800)
def test_sphere_with_regularization():
    report = derham_iso_check(
        reference_complex("sphere"),
        eps=0.1,
        quad_degree=2,
        kernel_degree=0,
        regularize_max_dim=2,
    )
    assert report["holds"]
    assert report["regularization_checked"]
    for k in (0, 2):
        leg = report["degrees"][k]["regularization"]
        assert leg["holds"]
        assert leg["locality"]
    assert report["degrees"][1]["regularization"] is None


def test_without_regularization():
    report = derham_iso_check(reference_complex("torus7"), check_regularization=False, p=1.0)
    assert report["holds"]
    assert report["p"] == 1.0
    assert report["betti"] == [1, 2, 1]
