from __future__ import annotations

import logging

from derham_lab._complex import SimplicialComplex, boundary_of_simplex

logger = logging.getLogger(__name__)


def _torus7() -> list[tuple[int, int, int]]:
    # the minimal 7-vertex torus: every edge lies on exactly two triangles
    triangles = []
    for i in range(7):
        triangles.append((i, (i + 1) % 7, (i + 3) % 7))
        triangles.append((i, (i + 2) % 7, (i + 3) % 7))
    return triangles


_REFERENCE = {
    "triangle": lambda: [(0, 1, 2)],
    "circle": lambda: [(0, 1), (1, 2), (0, 2)],
    "sphere": lambda: list(boundary_of_simplex((0, 1, 2, 3)).facets),
    "torus7": _torus7,
    "two_triangles": lambda: [(0, 1, 2), (3, 4, 5)],
    "bowtie": lambda: [(0, 1, 2), (0, 3, 4)],
    "figure_eight": lambda: [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)],
    "edge_pair": lambda: [(0, 1), (2, 3)],
}

REFERENCE_NAMES = tuple(_REFERENCE)


def reference_complex(name: str) -> SimplicialComplex:
    """One of the small complexes used throughout the test suite and the CLI.

    Args:
        name (str): one of ``triangle``, ``circle`` (triangle boundary),
            ``sphere`` (tetrahedron boundary), ``torus7``, ``two_triangles``,
            ``bowtie``, ``figure_eight`` or ``edge_pair``

    Raises:
        KeyError: for an unknown name
    """
    if name not in _REFERENCE:
        raise KeyError(f"Unknown reference complex {name!r}, expected one of {REFERENCE_NAMES}")
    logger.debug(f"Building reference complex {name}")
    return SimplicialComplex(_REFERENCE[name](), name=name)
