from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Any

import networkx as nx
import numpy as np
import sympy as sp

from derham_lab._errors import BouquetError, MissingChartError
from derham_lab.extension._bouquet import Bouquet, BouquetExtension
from derham_lab.forms._patch import PatchField
from derham_lab.forms._piecewise import PiecewiseForm, to_barycentric
from derham_lab.forms._poly import AffineMap, pull_coefficients, pullback
from derham_lab.forms._quadrature import stroud_rule

if TYPE_CHECKING:
    from collections.abc import Mapping

    from derham_lab._complex import Simplex, SimplicialComplex
    from derham_lab.forms._fields import ComplexField

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi
DEFAULT_RADIUS = 1.25


def _barycentric_jacobian(m: int) -> np.ndarray:
    """``dt / dx`` for the chart ``t = (1 - sum x, x)``, shape (m + 1, m)."""
    return np.vstack([-np.ones((1, m)), np.eye(m)])


def _sector_parts(facet: Simplex, coords: np.ndarray, a: int, b: int, start: float, width: float):
    """Polar data of the map of a triangle ``(v, a, b)`` onto a sector.

    The sector starts at angle ``start`` and has angular ``width``;
    ``rho = R (t_a + t_b)`` and ``theta = start + width t_b / (t_a + t_b)``.
    """
    coords = np.asarray(coords, dtype=float).reshape(-1, 2)
    t = to_barycentric(coords)
    ia, ib = facet.index(a), facet.index(b)
    total = t[:, ia] + t[:, ib]
    s = np.divide(t[:, ib], total, out=np.full_like(total, 0.5), where=total > 0)
    return ia, ib, total, s, start + width * s


def _polar(rho: np.ndarray, theta: np.ndarray) -> np.ndarray:
    return np.stack([rho * np.cos(theta), rho * np.sin(theta)], axis=1)


def _sector_jacobian(
    radius: float, width: float, ia: int, ib: int, s: np.ndarray, theta: np.ndarray
) -> np.ndarray:
    T = _barycentric_jacobian(2)
    d_rho = radius * (T[ia] + T[ib])
    # rho d theta = R width ((1 - s) dt_b - s dt_a)
    rho_dtheta = radius * width * ((1 - s)[:, None] * T[ib] - s[:, None] * T[ia])
    radial = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    angular = np.stack([-np.sin(theta), np.cos(theta)], axis=1)
    return radial[:, :, None] * d_rho[None, None, :] + angular[:, :, None] * rho_dtheta[:, None, :]


def _link_graph(facets: tuple[Simplex, ...], vertex: int) -> nx.Graph:
    """Link of a vertex: the other vertices of its facets, with the edges of triangles."""
    link = nx.Graph()
    for f in facets:
        others = [u for u in f if u != vertex]
        link.add_nodes_from(others)
        if len(others) == 2:
            link.add_edge(*others)
    return link


class StarChart(ABC):
    """A bi-Lipschitz map from the open star of a vertex onto a neighborhood of ``B_1``.

    ``to_chart`` sends chart points of a star facet to R^n. The image of
    the open star is the ball of radius ``radius`` and the vertex goes to
    the origin. The shrunken star ``t_v >= 1 / (dim + 1)``, which together
    with the other shrunken stars covers the complex, lands in the ball of
    radius ``inner_radius``.

    Args:
        complex (SimplicialComplex): the complex
        vertex (int): center of the star
        radius (float): radius of the image, above 1
    """

    #: dimension of the chart target
    ambient_dim: int = 1

    def __init__(self, complex: SimplicialComplex, vertex: int, radius: float = DEFAULT_RADIUS):
        self.complex = complex
        self.vertex = complex.check_vertex(vertex)
        self.radius = float(radius)
        if self.radius <= 1:
            raise MissingChartError(
                f"Chart radius {self.radius} at vertex {vertex} does not contain B_1"
            )
        self.facets: tuple[Simplex, ...] = tuple(f for f in complex.facets if vertex in f)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(vertex={self.vertex}, radius={self.radius})"

    @property
    def inner_radius(self) -> float:
        """Radius of the image of the shrunken star."""
        m = self.complex.dim
        return self.radius * m / (m + 1)

    def vertex_weight(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        """Barycentric coordinate ``t_v`` of the center at chart points of a facet."""
        t = to_barycentric(np.asarray(coords, dtype=float).reshape(-1, len(facet) - 1))
        return t[:, facet.index(self.vertex)]

    def contains(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        """Mask of the points that lie in the open star."""
        coords = np.asarray(coords, dtype=float).reshape(-1, len(facet) - 1)
        if facet not in self.facets:
            return np.zeros(len(coords), dtype=bool)
        return self.vertex_weight(facet, coords) > 0

    @abstractmethod
    def to_chart(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        """Images (N, n) of chart points of a star facet."""
        raise NotImplementedError

    @abstractmethod
    def forward_jacobian(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        """``D phi`` at chart points of a star facet, shape (N, n, m)."""
        raise NotImplementedError

    @abstractmethod
    def push(self, field: ComplexField) -> PatchField:
        """The pushforward ``phi_* field`` as a field on the chart image."""
        raise NotImplementedError

    def inclusion_report(self, degree: int = 6) -> dict[str, Any]:
        """Certify ``B_1`` in the image and the shrunken star inside ``B_1``.

        Checked on the vertices of every star facet and on Stroud nodes.
        """
        worst = 0.0
        m = self.complex.dim
        for facet in self.facets:
            dim = len(facet) - 1
            nodes, _ = stroud_rule(dim, degree)
            corners = np.vstack([np.zeros((1, dim)), np.eye(dim)])
            points = np.vstack([corners, nodes])
            shrunken = self.vertex_weight(facet, points) >= 1.0 / (m + 1)
            if shrunken.any():
                r = np.linalg.norm(self.to_chart(facet, points[shrunken]), axis=1)
                worst = max(worst, float(r.max()))
        return {
            "vertex": self.vertex,
            "radius": self.radius,
            "inner_radius": self.inner_radius,
            "ball_in_image": self.radius > 1,
            "max_shrunken_radius": worst,
            "shrunken_in_ball": worst <= self.inner_radius + 1e-12 and self.inner_radius < 1,
        }


class _InvertibleChart(StarChart):
    """A chart onto an open subset of R^m, the dimension of the star facets."""

    @abstractmethod
    def from_chart(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Preimages of (N, n) points inside the image.

        Returns:
            tuple[np.ndarray, np.ndarray]: (N,) positions in ``facets`` and
                (N, m) chart coordinates

        Raises:
            ValueError: if a point lies outside the image
        """
        raise NotImplementedError

    def inverse_jacobian(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        return np.linalg.inv(self.forward_jacobian(facet, coords))

    def push(self, field: ComplexField) -> PatchField:
        return ChartPushforward(self, field)

    def roundtrip_defect(self, points: np.ndarray) -> float:
        """``max |phi(phi^-1 y) - y|`` over points of the image."""
        points = np.asarray(points, dtype=float).reshape(-1, self.ambient_dim)
        ids, coords = self.from_chart(points)
        back = np.empty_like(points)
        for i in np.unique(ids):
            mask = ids == i
            back[mask] = self.to_chart(self.facets[i], coords[mask])
        return float(np.max(np.abs(back - points), initial=0.0))


class ChartPushforward(PatchField):
    """``phi_* field`` on the image of an invertible star chart."""

    def __init__(self, chart: _InvertibleChart, field: ComplexField):
        super().__init__(chart.ambient_dim, field.degree)
        self.chart = chart
        self.field = field
        self.kink_points = getattr(chart, "kink_points", ())
        self.kink_angles = getattr(chart, "kink_angles", ())

    def __repr__(self) -> str:
        return f"ChartPushforward({self.chart!r}, degree={self.degree})"

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, self.dim)
        ids, coords = self.chart.from_chart(points)
        out = np.zeros((len(points), math.comb(self.dim, self.degree)))
        for i in np.unique(ids):
            mask = ids == i
            facet = self.chart.facets[i]
            values = self.field.evaluate(facet, coords[mask])
            J = self.chart.inverse_jacobian(facet, coords[mask])
            out[mask] = pull_coefficients(J, values, self.degree)
        return out

    def exterior_d(self) -> PatchField:
        return ChartPushforward(self.chart, self.field.exterior_d())


class LineChart(_InvertibleChart):
    """Chart of the star of a degree-2 vertex of a graph onto (-R, R).

    The first star edge goes to ``z = -R (1 - t_v)``, the second one to
    ``z = R (1 - t_v)``.
    """

    ambient_dim = 1
    kink_points = (0.0,)

    def __init__(self, complex: SimplicialComplex, vertex: int, radius: float = DEFAULT_RADIUS):
        super().__init__(complex, vertex, radius)
        if len(self.facets) != 2 or any(len(f) != 2 for f in self.facets):
            raise MissingChartError(f"Vertex {vertex} is not an inner vertex of a path")
        self._side = {self.facets[0]: -1.0, self.facets[1]: 1.0}

    def _dt(self, facet: Simplex) -> float:
        """``dt_v / dx1`` on an edge."""
        return 1.0 if facet[1] == self.vertex else -1.0

    def to_chart(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        t = self.vertex_weight(facet, coords)
        return (self._side[facet] * self.radius * (1.0 - t))[:, None]

    def forward_jacobian(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        n = len(np.asarray(coords).reshape(-1, 1))
        slope = -self._side[facet] * self.radius * self._dt(facet)
        return np.full((n, 1, 1), slope)

    def from_chart(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        z = np.asarray(points, dtype=float).reshape(-1)
        if np.any(np.abs(z) >= self.radius):
            raise ValueError(f"Points outside the chart image (-{self.radius}, {self.radius})")
        ids = (z >= 0).astype(int)
        t = 1.0 - np.abs(z) / self.radius
        forward = np.array([self._dt(f) > 0 for f in self.facets])[ids]
        x1 = np.where(forward, t, 1.0 - t)
        return ids, x1[:, None]


class PolarChart(_InvertibleChart):
    """Chart of a disk star in a surface onto the disk of radius R.

    The link is a cycle ``a_0, ..., a_(m-1)``; the triangle ``(v, a_j, a_(j+1))``
    goes to the sector between the angles ``2 pi j / m`` and ``2 pi (j + 1) / m``
    by ``rho = R (1 - t_v)`` and ``theta = 2 pi (j + t_b / (t_a + t_b)) / m``.
    The map is homogeneous of degree one in ``(t_a, t_b)``, so it is
    bi-Lipschitz with a Jacobian that only depends on the angle.
    """

    ambient_dim = 2

    def __init__(self, complex: SimplicialComplex, vertex: int, radius: float = DEFAULT_RADIUS):
        super().__init__(complex, vertex, radius)
        if any(len(f) != 3 for f in self.facets) or not self.facets:
            raise MissingChartError(f"The star of vertex {vertex} is not made of triangles")
        link = _link_graph(self.facets, vertex)
        if not nx.is_connected(link) or any(d != 2 for _, d in link.degree):
            raise MissingChartError(f"The link of vertex {vertex} is not a cycle")
        cycle = [a for a, _ in nx.find_cycle(link, source=min(link.nodes))]
        if len(cycle) != link.number_of_nodes():
            raise MissingChartError(f"The link of vertex {vertex} is not a single cycle")
        self.cycle = tuple(cycle)
        self.sectors = len(cycle)
        order = []
        for j, a in enumerate(cycle):
            b = cycle[(j + 1) % self.sectors]
            order.append((tuple(sorted((vertex, a, b))), a, b))
        self.facets = tuple(f for f, _, _ in order)
        self._ends = {f: (j, a, b) for j, (f, a, b) in enumerate(order)}
        self.kink_angles = tuple(TWO_PI * j / self.sectors for j in range(self.sectors))

    def _parts(self, facet: Simplex, coords: np.ndarray):
        j, a, b = self._ends[facet]
        width = TWO_PI / self.sectors
        return _sector_parts(facet, coords, a, b, j * width, width)

    def to_chart(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        _, _, total, _, theta = self._parts(facet, coords)
        return _polar(self.radius * total, theta)

    def forward_jacobian(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        ia, ib, _, s, theta = self._parts(facet, coords)
        return _sector_jacobian(self.radius, TWO_PI / self.sectors, ia, ib, s, theta)

    def from_chart(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        rho = np.hypot(points[:, 0], points[:, 1])
        if np.any(rho >= self.radius):
            raise ValueError(f"Points outside the chart disk of radius {self.radius}")
        u = np.mod(np.arctan2(points[:, 1], points[:, 0]), TWO_PI) * self.sectors / TWO_PI
        ids = np.minimum(np.floor(u).astype(int), self.sectors - 1)
        s = u - ids
        total = rho / self.radius
        coords = np.empty((len(points), 2))
        for j in np.unique(ids):
            mask = ids == j
            facet = self.facets[j]
            _, a, b = self._ends[facet]
            t = np.zeros((mask.sum(), 3))
            t[:, facet.index(self.vertex)] = 1.0 - total[mask]
            t[:, facet.index(a)] = (1.0 - s[mask]) * total[mask]
            t[:, facet.index(b)] = s[mask] * total[mask]
            coords[mask] = t[:, 1:]
        return ids, coords


class ConeChart(StarChart):
    """Chart of a star whose link is a disjoint union of paths, onto a cone in the plane.

    Each link path gets consecutive sectors, one per link edge, followed by
    an empty gap sector; all have width ``2 pi / (edges + paths)``.
    Triangles go onto their sectors as in :class:`PolarChart`. The star of
    a graph vertex is the case of paths without edges: each star edge goes
    onto a ray, as in :class:`BouquetChart`, followed by a gap.

    The image is not open, so :meth:`push` composes with the retraction
    ``psi`` of the plane onto the image that folds each half of a gap onto
    its nearer boundary ray: at radius ``r`` and relative angular distance
    ``s`` from the ray a point goes to radius ``r (1 - s)`` on the ray.
    ``psi`` is Lipschitz, so the pushforward commutes with ``d``.
    """

    ambient_dim = 2

    def __init__(self, complex: SimplicialComplex, vertex: int, radius: float = DEFAULT_RADIUS):
        super().__init__(complex, vertex, radius)
        dims = {len(f) - 1 for f in self.facets}
        if len(dims) != 1 or not dims <= {1, 2}:
            raise MissingChartError(
                f"No cone chart for the star of vertex {vertex} with facets of "
                f"dimensions {sorted(dims)}"
            )
        link = _link_graph(self.facets, vertex)
        if any(d > 2 for _, d in link.degree) or not nx.is_forest(link):
            raise MissingChartError(f"The link of vertex {vertex} is not a disjoint union of paths")
        paths = []
        for component in sorted(nx.connected_components(link), key=min):
            path = link.subgraph(component)
            start = min(u for u in component if path.degree(u) <= 1)
            paths.append((start, *(b for _, b in nx.dfs_edges(path, source=start))))
        self.paths = tuple(paths)
        self.width = TWO_PI / (link.number_of_edges() + len(paths))

        # piece of every facet as (start angle, a, b); a == b on rays
        self._pieces: dict[Simplex, tuple[float, int, int]] = {}
        # boundary rays of every path as (facet, link vertex)
        ends: list[tuple[tuple[Simplex, int], tuple[Simplex, int]]] = []
        starts = []
        angle = 0.0
        for path in paths:
            starts.append(angle)
            if len(path) == 1:
                facet = tuple(sorted((vertex, path[0])))
                self._pieces[facet] = (angle, path[0], path[0])
                ends.append(((facet, path[0]), (facet, path[0])))
            else:
                first = None
                for a, b in zip(path, path[1:]):
                    facet = tuple(sorted((vertex, a, b)))
                    self._pieces[facet] = (angle, a, b)
                    first = first or facet
                    angle += self.width
                ends.append(((first, path[0]), (facet, path[-1])))
            angle += self.width
        self.facets = tuple(self._pieces)
        # gap after path j as (start angle, ray before it, ray after it)
        self._gaps = tuple(
            (
                starts[j] + (len(path) - 1) * self.width,
                ends[j][1],
                ends[(j + 1) % len(paths)][0],
            )
            for j, path in enumerate(paths)
        )
        angles = {start for start, _, _ in self._pieces.values()}
        angles.update(start + self.width for start, a, b in self._pieces.values() if a != b)
        angles.update(start + self.width / 2 for start, _, _ in self._gaps)
        self.kink_angles = tuple(sorted({math.fmod(a, TWO_PI) for a in angles}))

    def _direction(self, facet: Simplex) -> np.ndarray:
        start = self._pieces[facet][0]
        return np.array([math.cos(start), math.sin(start)])

    def to_chart(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        start, a, b = self._pieces[facet]
        if a == b:
            r = self.radius * (1.0 - self.vertex_weight(facet, coords))
            return np.outer(r, self._direction(facet))
        _, _, total, _, theta = _sector_parts(facet, coords, a, b, start, self.width)
        return _polar(self.radius * total, theta)

    def forward_jacobian(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        start, a, b = self._pieces[facet]
        if a == b:
            n = len(np.asarray(coords).reshape(-1, 1))
            dt = 1.0 if facet[1] == self.vertex else -1.0
            column = -self.radius * dt * self._direction(facet)
            return np.broadcast_to(column[None, :, None], (n, 2, 1)).copy()
        ia, ib, _, s, theta = _sector_parts(facet, coords, a, b, start, self.width)
        return _sector_jacobian(self.radius, self.width, ia, ib, s, theta)

    def retract(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Star points ``phi^-1 psi(y)`` and their Jacobians ``D(phi^-1 psi)``.

        Args:
            points (np.ndarray): (N, 2) points of the disk of radius ``radius``

        Returns:
            tuple[np.ndarray, np.ndarray, np.ndarray]: (N,) positions in
                ``facets``, (N, m) chart coordinates and (N, m, 2) Jacobians

        Raises:
            ValueError: if a point lies outside the disk
        """
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        r = np.hypot(points[:, 0], points[:, 1])
        if np.any(r >= self.radius):
            raise ValueError(f"Points outside the chart disk of radius {self.radius}")
        theta = np.arctan2(points[:, 1], points[:, 0])
        radial = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        angular = np.stack([-np.sin(theta), np.cos(theta)], axis=1)
        m = len(self.facets[0]) - 1
        ids = np.full(len(points), -1)
        coords = np.zeros((len(points), m))
        D = np.zeros((len(points), m, 2))

        for i, facet in enumerate(self.facets):
            start, a, b = self._pieces[facet]
            if a == b:
                continue
            sel = np.flatnonzero((ids < 0) & (np.mod(theta - start, TWO_PI) <= self.width))
            if not len(sel):
                continue
            s = np.mod(theta[sel] - start, TWO_PI) / self.width
            total = r[sel] / self.radius
            t = np.zeros((len(sel), 3))
            t[:, facet.index(self.vertex)] = 1.0 - total
            t[:, facet.index(a)] = (1.0 - s) * total
            t[:, facet.index(b)] = s * total
            ids[sel] = i
            coords[sel] = t[:, 1:]
            D[sel] = np.linalg.inv(self.forward_jacobian(facet, t[:, 1:]))

        half = self.width / 2
        for start, before, after in self._gaps:
            offset = np.mod(theta - start, TWO_PI)
            in_gap = (ids < 0) & (offset <= self.width)
            # sign of d s / d theta, s the relative distance to the nearer ray
            for (facet, u), side, sign in (
                (before, offset <= half, 1.0),
                (after, offset > half, -1.0),
            ):
                sel = np.flatnonzero(in_gap & side)
                if not len(sel):
                    continue
                s = (offset[sel] if sign > 0 else self.width - offset[sel]) / half
                folded = r[sel] * (1.0 - s)
                grad = (1.0 - s)[:, None] * radial[sel] - sign / half * angular[sel]
                t = np.zeros((len(sel), len(facet)))
                t[:, facet.index(self.vertex)] = 1.0 - folded / self.radius
                t[:, facet.index(u)] = folded / self.radius
                row = np.array(
                    [(w == u) - (w == self.vertex) for w in facet[1:]], dtype=float
                ) / self.radius
                ids[sel] = self.facets.index(facet)
                coords[sel] = t[:, 1:]
                D[sel] = row[None, :, None] * grad[:, None, :]
        if np.any(ids < 0):
            raise ValueError("Points not covered by the cone chart")
        return ids, coords, D

    def push(self, field: ComplexField) -> PatchField:
        return ConePushforward(self, field)


class ConePushforward(PatchField):
    """``psi^* phi_* field`` on the disk of a cone chart, with ``psi`` its retraction."""

    def __init__(self, chart: ConeChart, field: ComplexField):
        super().__init__(chart.ambient_dim, field.degree)
        self.chart = chart
        self.field = field
        self.kink_angles = chart.kink_angles

    def __repr__(self) -> str:
        return f"ConePushforward({self.chart!r}, degree={self.degree})"

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, self.dim)
        ids, coords, D = self.chart.retract(points)
        out = np.zeros((len(points), math.comb(self.dim, self.degree)))
        for i in np.unique(ids):
            mask = ids == i
            values = self.field.evaluate(self.chart.facets[i], coords[mask])
            out[mask] = pull_coefficients(D[mask], values, self.degree)
        return out

    def exterior_d(self) -> PatchField:
        return ConePushforward(self.chart, self.field.exterior_d())


class BouquetChart(StarChart):
    """Chart of the star of a degree-2m vertex of a graph onto a bouquet of m segments.

    Star edges are paired in order; the pair ``(e_2j, e_2j+1)`` goes to the
    segment at angle ``j pi / m``, with ``e_2j`` on the ray ``j pi / m`` and
    ``e_2j+1`` on the opposite ray. The image sits inside R^2, so the chart
    has no inverse on open sets; instead :meth:`push` extends a piecewise
    form off the bouquet (see :class:`~derham_lab.extension.BouquetExtension`).
    """

    ambient_dim = 2

    def __init__(self, complex: SimplicialComplex, vertex: int, radius: float = DEFAULT_RADIUS):
        super().__init__(complex, vertex, radius)
        degree = len(self.facets)
        if any(len(f) != 2 for f in self.facets) or degree == 0 or degree % 2:
            raise BouquetError(
                f"The star of vertex {vertex} has {degree} edges and is not a 1-bouquet"
            )
        self.segments = degree // 2
        self.angles = tuple(math.pi * j / self.segments for j in range(self.segments))
        self._ray: dict[Simplex, tuple[int, int]] = {}
        for i, facet in enumerate(self.facets):
            j, sign = divmod(i, 2)
            self._ray[facet] = (j, 1 if sign == 0 else -1)

    def _direction(self, facet: Simplex) -> np.ndarray:
        j, sign = self._ray[facet]
        return sign * np.array([math.cos(self.angles[j]), math.sin(self.angles[j])])

    def _dt(self, facet: Simplex) -> float:
        return 1.0 if facet[1] == self.vertex else -1.0

    def to_chart(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        r = self.radius * (1.0 - self.vertex_weight(facet, coords))
        return np.outer(r, self._direction(facet))

    def forward_jacobian(self, facet: Simplex, coords: np.ndarray) -> np.ndarray:
        n = len(np.asarray(coords).reshape(-1, 1))
        column = -self.radius * self._dt(facet) * self._direction(facet)
        return np.broadcast_to(column[None, :, None], (n, 2, 1)).copy()

    def bouquet(self, field: PiecewiseForm) -> Bouquet:
        """The piecewise form as a bouquet presentation in the coordinate ``z``."""
        halves: list[list[Any]] = [[None, None] for _ in range(self.segments)]
        for facet in self.facets:
            j, sign = self._ray[facet]
            # z = sign R (1 - t_v) and t_v = x1 or 1 - x1
            scale = sp.Rational(str(self.radius))
            if self._dt(facet) > 0:
                chart = AffineMap(sp.Matrix([[-sign / scale]]), [1])
            else:
                chart = AffineMap(sp.Matrix([[sign / scale]]), [0])
            halves[j][sign > 0] = pullback(chart, field.piece(facet))
        return Bouquet(self.angles, tuple(tuple(pair) for pair in halves))

    def push(self, field: ComplexField) -> PatchField:
        """The bouquet extension of a piecewise form.

        Raises:
            MissingChartError: for fields that are not piecewise polynomial
        """
        if not isinstance(field, PiecewiseForm):
            raise MissingChartError(
                f"Bouquet stars take piecewise polynomial forms, got {type(field).__name__}"
            )
        return BouquetExtension(self.bouquet(field))


def star_chart(
    complex: SimplicialComplex, vertex: int, radius: float = DEFAULT_RADIUS
) -> StarChart | None:
    """The built-in chart of one star, ``None`` for an isolated vertex.

    Inner vertices of paths get a :class:`LineChart` and disk stars of
    surfaces a :class:`PolarChart`. Other stars of graphs, and stars in
    2-complexes whose link is a disjoint union of paths, get a
    :class:`ConeChart`.

    Raises:
        MissingChartError: if no built-in chart fits the star
    """
    facets = tuple(f for f in complex.facets if vertex in f)
    if facets == ((vertex,),):
        return None
    dims = {len(f) - 1 for f in facets}
    if dims == {1} and len(facets) == 2:
        return LineChart(complex, vertex, radius)
    if dims == {2}:
        link = _link_graph(facets, vertex)
        if nx.is_connected(link) and all(d == 2 for _, d in link.degree):
            return PolarChart(complex, vertex, radius)
    if dims <= {1, 2}:
        chart = ConeChart(complex, vertex, radius)
        logger.debug("Cone chart at vertex %d with link paths %s", vertex, chart.paths)
        return chart
    raise MissingChartError(f"No built-in chart for the star of vertex {vertex}")


def star_charts(
    complex: SimplicialComplex,
    radius: float = DEFAULT_RADIUS,
    charts: Mapping[int, StarChart] | None = None,
) -> dict[int, StarChart | None]:
    """Charts for every star, ``None`` at isolated vertices.

    Args:
        complex (SimplicialComplex): the complex
        radius (float): image radius of the built-in charts
        charts (Mapping[int, StarChart], optional): user charts, preferred
            over the built-in ones and required above dimension 2

    Raises:
        MissingChartError: if some star has no chart
    """
    charts = dict(charts or {})
    out: dict[int, StarChart | None] = {}
    for v in complex.vertices:
        if v in charts:
            out[v] = charts[v]
        elif complex.dim > 2:
            raise MissingChartError(
                f"Complexes of dimension {complex.dim} need user charts; none for vertex {v}"
            )
        else:
            out[v] = star_chart(complex, v, radius)
    return out
