from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np
import sympy as sp

from derham_lab._errors import BouquetError
from derham_lab.extension._cylinder import cylinder_norm_report
from derham_lab.forms._norms import _check_p, _reduce, pointwise_norm
from derham_lab.forms._patch import PatchField, PolyPatchField
from derham_lab.forms._poly import AffineMap, PolyForm, exterior_d, pullback
from derham_lab.forms._quadrature import gauss_legendre

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class Bouquet:
    """A 1-bouquet of segments in the plane with a form on every segment.

    Segment ``j`` is ``z -> z (cos a_j, sin a_j)`` for ``z`` in [-1, 1] and
    carries a polynomial form in the coordinate ``z``: either one form on the
    whole segment or a pair ``(form on z < 0, form on z > 0)``. All segments
    share the center ``z = 0``.

    Attributes:
        angles (tuple[float, ...]): distinct directions in [0, pi)
        leaves (tuple): one form of dimension 1, or a pair of them, per segment
        halves (tuple[tuple[PolyForm, PolyForm], ...]): the leaves as pairs
    """

    angles: tuple[float, ...]
    leaves: tuple[PolyForm | tuple[PolyForm, PolyForm], ...]
    halves: tuple[tuple[PolyForm, PolyForm], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        object.__setattr__(self, "leaves", tuple(self.leaves))
        if not self.angles or len(self.angles) != len(self.leaves):
            raise BouquetError(
                f"A bouquet needs one leaf form per segment, got {len(self.angles)} angles "
                f"and {len(self.leaves)} forms"
            )
        if any(not 0 <= a < math.pi for a in self.angles):
            raise BouquetError(f"Segment angles must lie in [0, pi), got {self.angles}")
        ordered = sorted(self.angles)
        if any(b - a < 1e-12 for a, b in zip(ordered, ordered[1:])):
            raise BouquetError(f"Segment angles must be distinct, got {self.angles}")
        halves = []
        for leaf in self.leaves:
            pair = (leaf, leaf) if isinstance(leaf, PolyForm) else tuple(leaf)
            if len(pair) != 2 or not all(isinstance(f, PolyForm) for f in pair):
                raise BouquetError(f"A leaf is a form or a pair of forms, got {leaf!r}")
            halves.append(pair)
        object.__setattr__(self, "halves", tuple(halves))
        forms = [f for pair in self.halves for f in pair]
        if any(f.dim != 1 for f in forms) or len({f.degree for f in forms}) != 1:
            raise BouquetError("Leaf forms must all be forms of one degree on a segment")
        if self.degree == 0:
            centers = [float(f.evaluate(np.zeros((1, 1)))[0, 0]) for f in forms]
            if max(centers) - min(centers) > 1e-12:
                raise BouquetError(f"Leaf functions disagree at the center: {centers}")

    @property
    def degree(self) -> int:
        return self.halves[0][0].degree

    @property
    def size(self) -> int:
        return len(self.angles)

    def rays(self) -> list[tuple[float, int, int]]:
        """``(angle, leaf, sign)`` for the 2m rays, sorted by angle in [0, 2 pi).

        The ray at ``a_j`` is ``z = r`` on leaf ``j`` (sign +1), the ray at
        ``a_j + pi`` is ``z = -r`` (sign -1).
        """
        rays = [(a, j, 1) for j, a in enumerate(self.angles)]
        rays += [(a + math.pi, j, -1) for j, a in enumerate(self.angles)]
        return sorted(rays)

    def ray_form(self, index: int) -> PolyForm:
        """The leaf form along one ray, in the radius ``r`` in [0, 1]."""
        _, j, sign = self.rays()[index]
        return pullback(AffineMap(sp.Matrix([[sign]])), self.halves[j][sign > 0])

    def ray_points(self, index: int, r: np.ndarray) -> np.ndarray:
        angle = self.rays()[index][0]
        return np.outer(r, [math.cos(angle), math.sin(angle)])


class BouquetExtension(PatchField):
    """Sector-wise cylinder extension of a bouquet form into the unit disk.

    Every sector between two consecutive rays splits along its bisector into
    two halves, each a copy of (ray) x [0, 1] with ``s`` the angular distance
    to the ray over the half angle. On a half the extension is ``(1 - s)``
    times the ray form pulled back along the rotation onto the ray.

    Args:
        bouquet (Bouquet): the presentation
        derivative (bool): evaluate ``d`` of the extension instead
    """

    def __init__(self, bouquet: Bouquet, derivative: bool = False):
        super().__init__(2, bouquet.degree + derivative)
        self.bouquet = bouquet
        self.derivative = derivative
        rays = bouquet.rays()
        self._angles = np.array([a for a, _, _ in rays])
        self._widths = np.diff(np.append(self._angles, self._angles[0] + TWO_PI))
        self._sign = np.array([s for _, _, s in rays], dtype=float)
        self._forms = [bouquet.halves[j][s > 0] for _, j, s in rays]
        self._d_forms = [exterior_d(form) for form in self._forms]
        bisectors = self._angles + self._widths / 2
        self.kink_angles = tuple(np.sort(np.mod(np.concatenate([self._angles, bisectors]), TWO_PI)))

    def __repr__(self) -> str:
        return f"BouquetExtension(segments={self.bouquet.size}, degree={self.degree})"

    def _locate(self, points: np.ndarray):
        x, y = points[:, 0], points[:, 1]
        r = np.hypot(x, y)
        alpha = np.mod(np.arctan2(y, x), TWO_PI)
        sector = np.searchsorted(self._angles, alpha, side="right") - 1
        sector = np.mod(sector, len(self._angles))
        offset = np.mod(alpha - self._angles[sector], TWO_PI)
        half = self._widths[sector] / 2
        first = offset <= half
        ray = np.where(first, sector, np.mod(sector + 1, len(self._angles)))
        side = np.where(first, 1.0, -1.0)
        s = np.where(first, offset, self._widths[sector] - offset) / half
        return r, ray, side, s, half

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        k = self.bouquet.degree
        r, ray, side, s, half = self._locate(points)
        sign = self._sign[ray]
        z = (sign * r)[:, None]
        leaf_values = np.zeros(len(points))
        leaf_slopes = np.zeros(len(points))
        for idx in np.unique(ray):
            mask = ray == idx
            leaf_values[mask] = self._forms[idx].evaluate(z[mask])[:, 0]
            if k == 0 and self.derivative:
                leaf_slopes[mask] = self._d_forms[idx].evaluate(z[mask])[:, 0]
        radial = np.divide(points, r[:, None], out=np.zeros_like(points), where=r[:, None] > 0)
        angular = np.divide(
            np.stack([-points[:, 1], points[:, 0]], axis=1),
            (r**2)[:, None],
            out=np.zeros_like(points),
            where=r[:, None] > 0,
        )
        if not self.derivative:
            if k == 0:
                return ((1 - s) * leaf_values)[:, None]
            return ((1 - s) * leaf_values * sign)[:, None] * radial
        ds = (side / half)[:, None] * angular
        if k == 0:
            return ((1 - s) * leaf_slopes * sign)[:, None] * radial - leaf_values[:, None] * ds
        # d((1 - s) f dr) = -ds ^ f dr and dr ^ dtheta = dx ^ dy / r
        f = leaf_values * sign
        inv_r = np.divide(1.0, r, out=np.zeros_like(r), where=r > 0)
        return ((side / half) * f * inv_r)[:, None]

    def exterior_d(self) -> PatchField:
        if self.derivative:
            return PolyPatchField(PolyForm.zero(2, self.degree + 1))
        return BouquetExtension(self.bouquet, derivative=True)


def extend_bouquet(
    bouquet: Bouquet | None = None,
    angles: Sequence[float] | None = None,
    leaves: Sequence[PolyForm] | None = None,
) -> BouquetExtension:
    """Extend a form on a 1-bouquet of segments to the unit disk.

    Args:
        bouquet (Bouquet, optional): the presentation; built from ``angles``
            and ``leaves`` when omitted

    Returns:
        BouquetExtension: field on the disk that restricts to the leaf forms

    Raises:
        BouquetError: if the presentation is invalid
    """
    if bouquet is None:
        if angles is None or leaves is None:
            raise BouquetError("Pass a Bouquet or both angles and leaves")
        bouquet = Bouquet(tuple(angles), tuple(leaves))
    elif not isinstance(bouquet, Bouquet):
        raise TypeError(f"Expected a Bouquet, got {type(bouquet).__name__}")
    return BouquetExtension(bouquet)


def _disk_norm(field: PatchField, p: float, degree: int) -> float:
    """L_p norm over the unit disk with a polar rule split at every kink angle."""
    angles = np.sort(np.mod(np.asarray(field.kink_angles), TWO_PI))
    edges = np.append(angles, angles[0] + TWO_PI)
    r, w_r = gauss_legendre(degree, 0.0, 1.0)
    values, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        theta, w_t = gauss_legendre(degree, lo, hi)
        R, T = np.meshgrid(r, theta, indexing="ij")
        points = np.stack([(R * np.cos(T)).ravel(), (R * np.sin(T)).ravel()], axis=1)
        values.append(pointwise_norm(field.evaluate(points)))
        weights.append(np.outer(w_r * r, w_t).ravel())
    return _reduce(np.concatenate(values), np.concatenate(weights), p)


def bouquet_norm_report(
    extension: BouquetExtension, p: float = 2.0, degree: int = 12
) -> dict[str, Any]:
    """Norms of a bouquet extension in the cylinder model and in the disk.

    In the cylinder model every half sector is (ray) x [0, 1] with the
    product metric, and the extension is exactly the cylinder extension of
    the ray form. Every ray bounds two half sectors, so the L_p power of
    the extension is ``2 / (p + 1)`` times that of the bouquet form.

    The disk figures use the Euclidean metric of the plane. There ``d`` of
    the extension carries a ``1 / r`` term at the center, and its L_p norm
    is infinite for ``p >= 2`` unless the leaf forms vanish at the center.
    """
    p = _check_p(p)
    if math.isinf(p):
        raise ValueError("Bouquet norm reports are stated for finite p")
    bouquet = extension.bouquet
    rays = [cylinder_norm_report(bouquet.ray_form(i), p, degree) for i in range(2 * bouquet.size)]
    input_power = sum(ray["input_lp_power"] for ray in rays)
    output_power = 2 * sum(ray["output_lp_power"] for ray in rays)
    factor = output_power / input_power if input_power > 0 else 2 / (p + 1)

    center = max(
        abs(float(f.evaluate(np.zeros((1, 1)))[0, 0])) for pair in bouquet.halves for f in pair
    )
    disk_lp = _disk_norm(extension, p, degree)
    if p >= 2 and center > 1e-14:
        disk_d = math.inf
    else:
        disk_d = _disk_norm(extension.exterior_d(), p, degree)
    return {
        "p": p,
        "model_lp_input": input_power ** (1 / p),
        "model_lp_output": output_power ** (1 / p),
        "model_lp_factor": factor,
        "exact_model_lp_factor": 2 / (p + 1),
        "rays_hold": all(ray["holds"] for ray in rays),
        "disk_lp": disk_lp,
        "disk_d_lp": disk_d,
        "holds": bool(
            abs(factor - 2 / (p + 1)) <= 1e-10
            and output_power <= input_power * (1 + 1e-10) + 1e-14
            and all(ray["holds"] for ray in rays)
        ),
    }
