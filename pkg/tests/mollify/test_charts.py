import numpy as np
import pytest
from derham_lab import SimplicialComplex
from derham_lab._errors import BouquetError, MissingChartError
from derham_lab.forms import LinearCombinationField
from derham_lab.loaders import reference_complex
from derham_lab.mollify import (
    BouquetChart,
    ConeChart,
    FiniteDifferencePatch,
    LineChart,
    PolarChart,
    star_chart,
    star_charts,
)
from derham_lab.whitney import Cochain, whitney

from tests.test_utils import get_disk_points


def test_line_chart():
    K = reference_complex("circle")
    chart = star_chart(K, 1)
    assert isinstance(chart, LineChart)
    assert chart.facets == ((0, 1), (1, 2))
    # the vertex goes to the origin and the far ends to -R and R
    assert chart.to_chart((0, 1), np.array([[1.0], [0.0]]))[:, 0].tolist() == [0.0, -1.25]
    assert chart.to_chart((1, 2), np.array([[1.0]]))[0, 0] == pytest.approx(1.25)

    z = np.linspace(-1.2, 1.2, 9)[:, None]
    assert chart.roundtrip_defect(z) < 1e-12
    with pytest.raises(ValueError):
        chart.from_chart(np.array([[1.3]]))

    report = chart.inclusion_report()
    assert report["inner_radius"] == pytest.approx(0.625)
    assert report["shrunken_in_ball"]


def test_line_chart_pushes_the_hat():
    K = reference_complex("circle")
    chart = star_chart(K, 1)
    hat = whitney(Cochain.indicator(K, (1,)))
    pushed = chart.push(hat)
    z = np.array([[-0.5], [0.0], [0.5]])
    np.testing.assert_allclose(pushed.evaluate(z)[:, 0], [0.6, 1.0, 0.6])
    np.testing.assert_allclose(pushed.exterior_d().evaluate(z)[[0, 2], 0], [0.8, -0.8])


@pytest.mark.parametrize("name,sectors", [("sphere", 3), ("torus7", 6)])
def test_polar_chart(name, sectors):
    K = reference_complex(name)
    chart = star_chart(K, 0)
    assert isinstance(chart, PolarChart)
    assert chart.sectors == sectors
    assert len(chart.kink_angles) == sectors
    assert chart.roundtrip_defect(get_disk_points(40, radius=1.2)) < 1e-12
    assert chart.inclusion_report()["shrunken_in_ball"]


def test_polar_chart_jacobian():
    K = reference_complex("torus7")
    chart = star_chart(K, 0)
    facet = chart.facets[2]
    coords = np.array([[0.2, 0.3], [0.1, 0.1], [0.5, 0.2]])
    # keep the vertex weight positive
    assert np.all(chart.contains(facet, coords))
    J = chart.forward_jacobian(facet, coords)
    step = 1e-6
    for j in range(2):
        e = np.zeros(2)
        e[j] = step
        fd = (chart.to_chart(facet, coords + e) - chart.to_chart(facet, coords - e)) / (2 * step)
        np.testing.assert_allclose(J[:, :, j], fd, atol=1e-6)


def test_missing_charts():
    # three triangles on one edge branch the link
    with pytest.raises(MissingChartError):
        star_chart(SimplicialComplex([(0, 1, 2), (0, 1, 3), (0, 1, 4)]), 0)
    # two disks pinched at a vertex have two link cycles
    pinched = SimplicialComplex(
        [(0, 1, 2), (0, 2, 3), (0, 1, 3), (0, 4, 5), (0, 5, 6), (0, 4, 6)]
    )
    with pytest.raises(MissingChartError):
        star_chart(pinched, 0)
    with pytest.raises(MissingChartError):
        star_chart(SimplicialComplex([(0, 1, 2), (0, 3)]), 0)
    with pytest.raises(MissingChartError):
        LineChart(reference_complex("circle"), 1, radius=0.9)
    with pytest.raises(MissingChartError):
        star_charts(SimplicialComplex([(0, 1, 2, 3)]))

    isolated = SimplicialComplex([(0, 1), (1, 2), (0, 2)], vertices=[0, 1, 2, 5])
    charts = star_charts(isolated)
    assert charts[5] is None
    assert isinstance(charts[0], LineChart)


def test_user_charts_win():
    K = reference_complex("circle")
    mine = LineChart(K, 0, radius=2.0)
    assert star_charts(K, charts={0: mine})[0] is mine


def test_bouquet_chart():
    K = reference_complex("figure_eight")
    chart = BouquetChart(K, 0)
    assert chart.segments == 2
    assert chart.angles == pytest.approx((0.0, np.pi / 2))

    hat = whitney(Cochain.indicator(K, (0,)))
    bouquet = chart.bouquet(hat)
    assert bouquet.size == 2
    assert bouquet.degree == 0

    with pytest.raises(BouquetError):
        BouquetChart(SimplicialComplex([(0, 1), (0, 2), (0, 3)]), 0)
    with pytest.raises(MissingChartError):
        chart.push(LinearCombinationField([(1.0, hat)]))


def away_from_kinks(chart, points, margin=0.05):
    """The points off the center and at least ``margin`` away from every kink angle."""
    theta = np.arctan2(points[:, 1], points[:, 0])
    gaps = [np.abs(np.angle(np.exp(1j * (theta - a)))) for a in chart.kink_angles]
    keep = (np.min(gaps, axis=0) > margin) & (np.hypot(*points.T) > margin)
    return points[keep]


@pytest.mark.parametrize(
    "name,vertex,paths,kinks",
    [
        ("figure_eight", 0, ((1,), (2,), (3,), (4,)), 8),
        ("edge_pair", 0, ((1,),), 2),
        ("triangle", 0, ((1, 2),), 3),
        ("bowtie", 0, ((1, 2), (3, 4)), 6),
        ("bowtie", 3, ((0, 4),), 3),
    ],
)
def test_cone_chart(name, vertex, paths, kinks):
    K = reference_complex(name)
    chart = star_chart(K, vertex)
    assert isinstance(chart, ConeChart)
    assert chart.paths == paths
    assert len(chart.kink_angles) == kinks
    assert set(chart.facets) == {f for f in K.facets if vertex in f}
    assert chart.inclusion_report()["shrunken_in_ball"]


def test_cone_chart_rays():
    K = reference_complex("figure_eight")
    chart = star_chart(K, 0)
    assert chart.width == pytest.approx(np.pi / 2)
    # the far end of the third star edge lies on the ray at angle pi
    far = chart.to_chart((0, 3), np.array([[1.0]]))
    np.testing.assert_allclose(far, [[-1.25, 0.0]], atol=1e-12)
    np.testing.assert_allclose(chart.to_chart((0, 3), np.array([[0.0]])), [[0.0, 0.0]], atol=1e-12)
    J = chart.forward_jacobian((0, 2), np.array([[0.3], [0.6]]))
    np.testing.assert_allclose(J[:, :, 0], [[0.0, 1.25], [0.0, 1.25]], atol=1e-12)


def test_cone_chart_jacobian():
    K = reference_complex("bowtie")
    chart = star_chart(K, 0)
    facet = chart.facets[1]
    coords = np.array([[0.2, 0.3], [0.1, 0.1], [0.5, 0.2]])
    J = chart.forward_jacobian(facet, coords)
    step = 1e-6
    for j in range(2):
        e = np.zeros(2)
        e[j] = step
        fd = (chart.to_chart(facet, coords + e) - chart.to_chart(facet, coords - e)) / (2 * step)
        np.testing.assert_allclose(J[:, :, j], fd, atol=1e-6)


def test_cone_chart_retraction():
    K = reference_complex("triangle")
    chart = star_chart(K, 0)
    # points of the image come back to themselves
    upper = get_disk_points(30, radius=1.2)
    upper[:, 1] = np.abs(upper[:, 1])
    ids, coords, _ = chart.retract(upper)
    np.testing.assert_allclose(chart.to_chart(chart.facets[0], coords), upper, atol=1e-12)
    assert np.all(ids == 0)

    # halfway into the gap the radius halves on the ray at angle pi, the edge (0, 2)
    point = 0.8 * np.array([[np.cos(1.25 * np.pi), np.sin(1.25 * np.pi)]])
    _, coords, _ = chart.retract(point)
    np.testing.assert_allclose(coords, [[0.0, 0.32]], atol=1e-12)
    # the gap bisector folds onto the vertex
    _, coords, _ = chart.retract(0.8 * np.array([[0.0, -1.0]]))
    np.testing.assert_allclose(coords, [[0.0, 0.0]], atol=1e-12)

    with pytest.raises(ValueError):
        chart.retract(np.array([[1.3, 0.0]]))


@pytest.mark.parametrize("name,vertex", [("triangle", 0), ("bowtie", 0), ("figure_eight", 0)])
def test_cone_retraction_jacobian(name, vertex):
    chart = star_chart(reference_complex(name), vertex)
    points = away_from_kinks(chart, get_disk_points(60, radius=1.2, seed=3))
    ids, _, D = chart.retract(points)
    step = 1e-6
    for j in range(2):
        e = np.zeros(2)
        e[j] = step
        ids_plus, plus, _ = chart.retract(points + e)
        ids_minus, minus, _ = chart.retract(points - e)
        assert np.all(ids_plus == ids) and np.all(ids_minus == ids)
        np.testing.assert_allclose(D[:, :, j], (plus - minus) / (2 * step), atol=1e-5)


@pytest.mark.parametrize(
    "name,simplex",
    [("figure_eight", (0,)), ("triangle", (0,)), ("triangle", (0, 1)), ("bowtie", (0, 3))],
)
def test_cone_pushforward_commutes_with_d(name, simplex):
    K = reference_complex(name)
    chart = star_chart(K, 0)
    pushed = chart.push(whitney(Cochain.indicator(K, simplex)))
    points = away_from_kinks(chart, get_disk_points(40, radius=1.1, seed=5))
    np.testing.assert_allclose(
        pushed.exterior_d().evaluate(points),
        FiniteDifferencePatch(pushed, step=1e-6).evaluate(points),
        atol=1e-5,
    )


def test_cone_pushforward_of_the_hat():
    K = reference_complex("triangle")
    chart = star_chart(K, 0)
    pushed = chart.push(whitney(Cochain.indicator(K, (0,))))
    points = np.array(
        [
            [0.0, 0.5],
            0.8 * np.array([np.cos(1.25 * np.pi), np.sin(1.25 * np.pi)]),
            [0.0, -0.8],
        ]
    )
    np.testing.assert_allclose(pushed.evaluate(points)[:, 0], [0.6, 0.68, 1.0], atol=1e-12)
