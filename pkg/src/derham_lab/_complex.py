from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import networkx as nx

from derham_lab._errors import ComplexError

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)

Simplex = tuple[int, ...]


def simplex_faces(simplex: Simplex, k: int | None = None) -> list[Simplex]:
    """All faces of a simplex, optionally only those of dimension k.

    Faces are returned as sorted tuples in lexicographic order. The simplex
    itself is included.
    """
    n = len(simplex) - 1
    dims = range(n + 1) if k is None else [k]
    faces = []
    for m in dims:
        if m < 0 or m > n:
            continue
        faces.extend(itertools.combinations(simplex, m + 1))
    return faces


def boundary_faces(simplex: Simplex) -> list[tuple[int, Simplex]]:
    """Codimension one faces of ``simplex`` paired with their sign.

    The face obtained by omitting position ``i`` carries sign ``(-1)**i``.
    """
    return [
        ((-1) ** i, simplex[:i] + simplex[i + 1 :]) for i in range(len(simplex))
    ]


def edge_key(edge: Simplex) -> str:
    return "-".join(str(v) for v in edge)


class SimplicialComplex:
    """A finite abstract simplicial complex with unit-edge metric data.

    Simplices are stored as strictly increasing vertex tuples, grouped by
    dimension and sorted lexicographically. The complex is face closed and is
    not mutated after construction. Every simplex is realised as the regular
    simplex with unit edges; declared edge lengths are kept only for the
    bounded geometry report.

    Attributes:
        vertices (tuple[int, ...]): vertex ids in ascending order
        simplices (dict[int, tuple[Simplex, ...]]): simplices of each dimension
        facets (tuple[Simplex, ...]): maximal simplices, sorted by dimension
            then lexicographically
        edge_length (dict[Simplex, float]): length of every edge, default 1
        L (float): declared bounded geometry constant
        name (str | None): optional name used in reports
    """

    def __init__(
        self,
        maximal_simplices: Iterable[Sequence[int]],
        vertices: Iterable[int] | None = None,
        edge_lengths: Mapping[Simplex, float] | None = None,
        L: float = 1.0,
        name: str | None = None,
    ):
        closure: dict[int, set[Simplex]] = {}
        declared = None if vertices is None else {int(v) for v in vertices}
        for raw in maximal_simplices:
            simplex = tuple(sorted(int(v) for v in raw))
            if len(simplex) == 0:
                raise ComplexError("Empty simplex in complex description")
            if len(set(simplex)) != len(simplex):
                raise ComplexError(f"Duplicate vertex inside simplex {tuple(raw)}")
            if declared is not None and not set(simplex) <= declared:
                raise ComplexError(
                    f"Simplex {simplex} uses undeclared vertices {set(simplex) - declared}"
                )
            for face in simplex_faces(simplex):
                closure.setdefault(len(face) - 1, set()).add(face)
        for v in declared or ():
            closure.setdefault(0, set()).add((v,))

        self.simplices: dict[int, tuple[Simplex, ...]] = {
            k: tuple(sorted(closure[k])) for k in sorted(closure)
        }
        self.vertices: tuple[int, ...] = tuple(s[0] for s in self.simplices.get(0, ()))
        self._index = {
            s: i for k in self.simplices for i, s in enumerate(self.simplices[k])
        }

        if L < 1:
            raise ComplexError(f"Bounded geometry constant L must be >= 1, got {L}")
        self.L = float(L)
        self.name = name

        self.edge_length: dict[Simplex, float] = {e: 1.0 for e in self.simplices.get(1, ())}
        for edge, length in (edge_lengths or {}).items():
            e = tuple(sorted(edge))
            if e not in self.edge_length:
                raise ComplexError(f"Edge length given for unknown edge {e}")
            if not length > 0:
                raise ComplexError(f"Edge length must be positive, got {length} on {e}")
            self.edge_length[e] = float(length)

        self.facets: tuple[Simplex, ...] = self._maximal()
        self.barycenter_of: dict[int, Simplex] | None = None

        self.graph = nx.Graph()
        self.graph.add_nodes_from(self.vertices)
        self.graph.add_edges_from(self.simplices.get(1, ()))

    def _maximal(self) -> tuple[Simplex, ...]:
        covered: set[Simplex] = set()
        for k in self.simplices:
            if k == 0:
                continue
            for s in self.simplices[k]:
                covered.update(boundary for _, boundary in boundary_faces(s))
        return tuple(
            s for k in sorted(self.simplices) for s in self.simplices[k] if s not in covered
        )

    def __repr__(self) -> str:
        counts = ", ".join(str(len(self.simplices[k])) for k in sorted(self.simplices))
        return f"SimplicialComplex(name={self.name!r}, counts=({counts}))"

    def __contains__(self, simplex: object) -> bool:
        return simplex in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.simplices == other.simplices

    def __hash__(self) -> int:
        return hash(tuple(self.facets))

    @property
    def dim(self) -> int:
        return max(self.simplices) if self.simplices else -1

    @property
    def is_pure(self) -> bool:
        """True if all maximal simplices have the top dimension."""
        return all(len(f) - 1 == self.dim for f in self.facets)

    def counts(self) -> tuple[int, ...]:
        """Number of simplices in each dimension, from vertices upward."""
        return tuple(len(self.simplices.get(k, ())) for k in range(self.dim + 1))

    def index(self, simplex: Simplex) -> int:
        """Position of ``simplex`` among the simplices of its dimension."""
        try:
            return self._index[tuple(simplex)]
        except KeyError:
            raise ComplexError(f"Simplex {tuple(simplex)} is not in the complex") from None

    def check_simplex(self, simplex: Sequence[int]) -> Simplex:
        s = tuple(simplex)
        if s not in self._index:
            raise ComplexError(f"Simplex {s} is not in the complex")
        return s

    def check_vertex(self, v: int) -> int:
        if (v,) not in self._index:
            raise ComplexError(f"Unknown vertex {v}")
        return v

    def facets_containing(self, simplex: Sequence[int]) -> list[Simplex]:
        s = set(self.check_simplex(simplex))
        return [f for f in self.facets if s <= set(f)]

    def cofaces(self, simplex: Sequence[int], k: int | None = None) -> list[Simplex]:
        """Simplices that contain ``simplex``, optionally of dimension ``k`` only."""
        s = set(self.check_simplex(simplex))
        dims = self.simplices if k is None else [k]
        return [t for m in dims for t in self.simplices.get(m, ()) if s <= set(t)]

    def vertex_degree(self, v: int) -> int:
        return self.graph.degree[self.check_vertex(v)]

    def star(self, v: int) -> tuple[SimplicialComplex, dict[Simplex, Simplex]]:
        """The closed star of a vertex and its inclusion into the complex.

        Args:
            v (int): vertex id

        Returns:
            tuple[SimplicialComplex, dict]: the star (all simplices containing
                v together with their faces) and the inclusion map, which is
                the identity on simplex tuples
        """
        self.check_vertex(v)
        maximal = [f for f in self.facets if v in f]
        sub = SimplicialComplex(maximal or [(v,)], name=f"star({v})")
        inclusion = {s: s for k in sub.simplices for s in sub.simplices[k]}
        return sub, inclusion

    def link(self, v: int) -> SimplicialComplex | None:
        """The link of ``v``: faces of simplices containing ``v`` that miss ``v``."""
        self.check_vertex(v)
        opposite = [tuple(u for u in f if u != v) for f in self.facets if v in f]
        opposite = [f for f in opposite if f]
        if not opposite:
            return None
        return SimplicialComplex(opposite, name=f"link({v})")

    def skeleton(self, m: int) -> SimplicialComplex:
        """Sub-complex of all simplices of dimension at most ``m``."""
        if not 0 <= m <= self.dim:
            raise ComplexError(f"Skeleton dimension {m} out of range 0..{self.dim}")
        top = [s for k in range(m + 1) for s in self.simplices[k]]
        edge_lengths = {e: length for e, length in self.edge_length.items() if m >= 1}
        return SimplicialComplex(
            top, edge_lengths=edge_lengths, L=self.L, name=f"{self.name}[{m}]"
        )

    def barycentric_subdivision(self) -> SimplicialComplex:
        """First barycentric subdivision.

        New vertices are numbered by enumerating the simplices of the complex
        dimension by dimension in lexicographic order; the attribute
        ``barycenter_of`` on the result maps each new vertex to the simplex it
        subdivides.
        """
        order = [s for k in sorted(self.simplices) for s in self.simplices[k]]
        vertex_of = {s: i for i, s in enumerate(order)}
        maximal = []
        for facet in self.facets:
            for perm in itertools.permutations(facet):
                chain = [tuple(sorted(perm[: j + 1])) for j in range(len(perm))]
                maximal.append([vertex_of[c] for c in chain])
        sub = SimplicialComplex(maximal, L=self.L, name=f"sd({self.name})")
        sub.barycenter_of = {i: s for s, i in vertex_of.items()}
        return sub

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(self.simplices[k]) for k in self.simplices)

    def to_dict(self) -> dict[str, Any]:
        """Deterministic JSON-ready description of the complex."""
        output: dict[str, Any] = {
            "vertices": list(self.vertices),
            "maximal_simplices": [list(f) for f in self.facets],
        }
        lengths = {edge_key(e): x for e, x in self.edge_length.items() if x != 1.0}
        if lengths:
            output["edge_lengths"] = lengths
        if self.L != 1.0:
            output["L"] = self.L
        if self.name:
            output["name"] = self.name
        return output


def boundary_of_simplex(simplex: Sequence[int]) -> SimplicialComplex:
    """The complex formed by the proper faces of a simplex of dimension at least 1."""
    simplex = tuple(sorted(int(v) for v in simplex))
    if len(simplex) < 2:
        raise ComplexError(f"A vertex has no boundary complex, got {simplex}")
    return SimplicialComplex(
        [face for _, face in boundary_faces(simplex)], name=f"boundary({edge_key(simplex)})"
    )


def build_complex(description: Mapping[str, Any]) -> SimplicialComplex:
    """Build a complex from a JSON-like description.

    Args:
        description (Mapping): with keys ``maximal_simplices`` (or ``maximal``),
            optional ``vertices``, ``edge_lengths`` (map ``"i-j"`` to float),
            ``L`` and ``name``

    Returns:
        SimplicialComplex: the face closed complex

    Raises:
        ComplexError: on duplicate vertices, unknown vertices or nonpositive
            edge lengths
    """
    maximal = description.get("maximal_simplices", description.get("maximal"))
    if maximal is None:
        raise ComplexError("Complex description needs a 'maximal_simplices' list")
    lengths = {}
    for key, value in (description.get("edge_lengths") or {}).items():
        try:
            u, v = (int(x) for x in str(key).split("-"))
        except ValueError:
            raise ComplexError(f"Edge length key {key!r} is not of the form 'i-j'") from None
        lengths[(u, v)] = float(value)
    return SimplicialComplex(
        maximal,
        vertices=description.get("vertices"),
        edge_lengths=lengths,
        L=float(description.get("L", 1.0)),
        name=description.get("name"),
    )


@dataclass(frozen=True)
class GeometryReport:
    """Bounded geometry diagnostics of a complex.

    Attributes:
        star_bound (int): maximal number of edges at a vertex
        edge_range (tuple[float, float]): shortest and longest edge
        connected (bool): whether the 1-skeleton is connected
        L_witness (float): smallest L for which edge lengths lie in [1/L, L]
        L (float): the L the report was checked against
    """

    star_bound: int
    edge_range: tuple[float, float]
    connected: bool
    L_witness: float
    L: float

    @property
    def bounded_geometry(self) -> bool:
        return self.connected and self.L_witness <= self.L

    def to_dict(self) -> dict[str, Any]:
        return {
            "star_bound": self.star_bound,
            "connected": self.connected,
            "L_witness": self.L_witness,
            "edge_range": list(self.edge_range),
            "L": self.L,
            "bounded_geometry": self.bounded_geometry,
        }


def check_geometry(K: SimplicialComplex, L: float | None = None) -> GeometryReport:
    """Star-boundedness, connectivity and edge-length range of a complex.

    Failures are reported as flags, nothing is raised.

    Args:
        K (SimplicialComplex): the complex
        L (float, optional): bounded geometry constant, defaults to ``K.L``

    Returns:
        GeometryReport: the report
    """
    L = K.L if L is None else float(L)
    degrees = dict(K.graph.degree)
    star_bound = max(degrees.values(), default=0)
    lengths = list(K.edge_length.values()) or [1.0]
    edge_range = (min(lengths), max(lengths))
    connected = K.graph.number_of_nodes() > 0 and nx.is_connected(K.graph)
    L_witness = max(edge_range[1], 1.0 / edge_range[0], 1.0)
    report = GeometryReport(star_bound, edge_range, connected, L_witness, L)
    logger.debug(f"Geometry of {K.name}: {report}")
    return report


def pl_path_length(K: SimplicialComplex, path: Sequence[Mapping[int, float]]) -> float:
    """Length of a piecewise linear path in the realisation of ``K``.

    Points are given by barycentric weights ``{vertex: weight}``. Each segment
    must lie in one simplex, and is measured in the unit-edge regular simplex,
    where the distance between barycentric points a, b is
    ``sqrt(sum((a_i - b_i)**2) / 2)``.

    Raises:
        ComplexError: if a point is not a convex combination or a segment
            leaves every simplex
    """
    points = []
    for point in path:
        weights = {int(v): float(w) for v, w in point.items() if w != 0}
        if any(w < 0 for w in weights.values()) or not math.isclose(
            sum(weights.values()), 1.0, abs_tol=1e-12
        ):
            raise ComplexError(f"Point {dict(point)} is not a barycentric combination")
        points.append(weights)

    length = 0.0
    for a, b in zip(points[:-1], points[1:]):
        support = tuple(sorted(set(a) | set(b)))
        if support not in K:
            raise ComplexError(f"Segment between {a} and {b} is not inside one simplex")
        sq = sum((a.get(v, 0.0) - b.get(v, 0.0)) ** 2 for v in support)
        length += math.sqrt(sq / 2)
    return length


def edge_path_upper_bound(K: SimplicialComplex, u: int, v: int) -> float:
    """Upper bound for the path metric between two vertices.

    The bound is the number of unit edges on a shortest 1-skeleton path;
    ``inf`` if the vertices lie in different components.
    """
    K.check_vertex(u)
    K.check_vertex(v)
    try:
        return float(nx.shortest_path_length(K.graph, u, v))
    except nx.NetworkXNoPath:
        return math.inf
