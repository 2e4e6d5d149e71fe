"""Planar projective primitives: five-point cross-ratios and the comparison gate.

All functions treat points as 2D pixel coordinates (anything convertible to a
float pair). The cross-ratio of five points ``o, a, b, c, d`` is built from
scalar 2D cross products of position vectors taken relative to ``o``::

    CR_o(a, b, c, d) = |a x c| |b x d| / (|b x c| |a x d|)

which is unchanged by any homography applied to all five points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DegenerateConfiguration

# Relative tolerances. Collinearity is scaled by diameter**2, separation by the image diagonal.
COLLINEAR_REL = 1e-9
SEPARATION_REL = 1e-6

# Operand order (a, b, c, d) for each origin: the other four vertices cyclically from origin+1.
OPERANDS = tuple(tuple((i + k) % 5 for k in range(1, 5)) for i in range(5))

# The ten vertex triples of a pentagon, with a lookup from sorted triple to slot.
_TRIPLES = tuple(combinations(range(5), 3))
_TRIPLE_SLOT = {t: s for s, t in enumerate(_TRIPLES)}


def _slot(i, j, k):
    return _TRIPLE_SLOT[tuple(sorted((i, j, k)))]


# For each origin: triple slots for (a,c), (b,d), (b,c), (a,d).
_CR_SLOTS = tuple(
    (_slot(o, a, c), _slot(o, b, d), _slot(o, b, c), _slot(o, a, d))
    for o, (a, b, c, d) in enumerate(OPERANDS)
)


def _as_point(p):
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite point {p!r}")
    return x, y


def _diameter(pts):
    best = 0.0
    for (x1, y1), (x2, y2) in combinations(pts, 2):
        d = (x1 - x2) ** 2 + (y1 - y2) ** 2
        if d > best:
            best = d
    return math.sqrt(best)


def cross_ratio(o, a, b, c, d) -> float:
    """Cross-ratio of ``a, b, c, d`` seen from origin ``o``.

    Raises DegenerateConfiguration if any of the four cross products is
    smaller than ``1e-9 * diameter**2`` (a collinear triple through ``o``).

    >>> cross_ratio((0, 0), (1, 0), (1, 1), (0, 1), (-1, 1))
    2.0
    """
    pts = [_as_point(p) for p in (o, a, b, c, d)]
    eps = COLLINEAR_REL * _diameter(pts) ** 2
    ox, oy = pts[0]
    (ax, ay), (bx, by), (cx, cy), (dx, dy) = [(x - ox, y - oy) for x, y in pts[1:]]
    ac = abs(ax * cy - ay * cx)
    bd = abs(bx * dy - by * dx)
    bc = abs(bx * cy - by * cx)
    ad = abs(ax * dy - ay * dx)
    if min(ac, bd, bc, ad) < eps or eps == 0.0:
        raise DegenerateConfiguration("collinear triple through the origin vertex")
    return (ac * bd) / (bc * ad)


def canonical_order(points) -> np.ndarray:
    """Indices sorting five points by polar angle about their centroid.

    Ties in angle (which only occur for coincident directions) fall back to
    the original index so the order is always deterministic.
    """
    pts = np.asarray(points, dtype=float)
    centre = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - centre[1], pts[:, 0] - centre[0])
    return np.lexsort((np.arange(len(pts)), ang))


def triple_areas(pts) -> list[float]:
    """Absolute doubled triangle areas for the ten vertex triples of five points."""
    out = []
    for i, j, k in _TRIPLES:
        xi, yi = pts[i]
        ux, uy = pts[j][0] - xi, pts[j][1] - yi
        vx, vy = pts[k][0] - xi, pts[k][1] - yi
        out.append(abs(ux * vy - uy * vx))
    return out


def check_pentagon(pts, min_sep: float = 0.0) -> float:
    """Validate five vertices, returning their diameter.

    ``min_sep`` is the minimum allowed distance between any two vertices;
    collinearity is judged against ``1e-9 * diameter**2``.
    """
    if len(pts) != 5:
        raise DegenerateConfiguration(f"a pentagon needs 5 vertices, got {len(pts)}")
    diam = _diameter(pts)
    if diam == 0.0:
        raise DegenerateConfiguration("coincident vertices")
    sep2 = min_sep * min_sep
    for (x1, y1), (x2, y2) in combinations(pts, 2):
        if (x1 - x2) ** 2 + (y1 - y2) ** 2 < sep2 or (x1 == x2 and y1 == y2):
            raise DegenerateConfiguration("vertices closer than the minimum separation")
    eps = COLLINEAR_REL * diam * diam
    if min(triple_areas(pts)) < eps:
        raise DegenerateConfiguration("three vertices are collinear")
    return diam


@dataclass(frozen=True)
class Pentagon:
    """Five vertices in a fixed order; validated on construction.

    The order is significant: vertex ``i`` of one pentagon is compared with
    vertex ``i`` of its counterpart in the other image.
    """

    vertices: tuple
    min_sep: float = 0.0

    def __post_init__(self):
        pts = tuple(_as_point(p) for p in self.vertices)
        object.__setattr__(self, "vertices", pts)
        check_pentagon(pts, self.min_sep)

    @classmethod
    def canonical(cls, points, min_sep: float = 0.0) -> "Pentagon":
        """Build a pentagon with vertices re-ordered by polar angle."""
        order = canonical_order(points)
        return cls(tuple(tuple(points[i]) for i in order), min_sep)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.vertices)

    @property
    def centroid(self) -> tuple[float, float]:
        xs, ys = zip(*self.vertices)
        return sum(xs) / 5.0, sum(ys) / 5.0


def cr_vector(pts) -> tuple[float, ...]:
    """Five cross-ratios of an ordered vertex list (no validation beyond degeneracy)."""
    areas = triple_areas(pts)
    eps = COLLINEAR_REL * _diameter(pts) ** 2
    if min(areas) < eps or eps == 0.0:
        raise DegenerateConfiguration("three vertices are collinear")
    return tuple(
        (areas[ac] * areas[bd]) / (areas[bc] * areas[ad]) for ac, bd, bc, ad in _CR_SLOTS
    )


def pentagon_cross_ratios(p: Pentagon) -> np.ndarray:
    """Cross-ratio with each vertex as origin, operands taken cyclically after it."""
    return np.array(cr_vector(p.vertices))


def cr_gate(cr: float, cr_prime: float, tau: float) -> bool:
    """True when two cross-ratios agree to within relative tolerance ``tau``.

    The comparison is ``|cr - cr'| / (cr + cr') <= tau``.
    """
    return abs(cr - cr_prime) / (cr + cr_prime) <= tau


class GateCounter:
    """Tally of cross-ratio gate evaluations, used as a cost measure."""

    __slots__ = ("count",)

    def __init__(self, count: int = 0):
        self.count = count

    def __repr__(self):
        return f"GateCounter({self.count})"


def vectors_match(cr1, cr2, tau: float, counter: GateCounter | None = None) -> bool:
    # All five gates are evaluated even after a failure so the cost tally is fixed per attempt.
    ok = True
    for x, y in zip(cr1, cr2):
        if not cr_gate(x, y, tau):
            ok = False
    if counter is not None:
        counter.count += len(cr1)
    return ok


def pentagons_shape_match(p1: Pentagon, p2: Pentagon, tau: float,
                          counter: GateCounter | None = None) -> bool:
    """Whether two vertex-corresponding pentagons are projectively the same shape."""
    return vectors_match(pentagon_cross_ratios(p1), pentagon_cross_ratios(p2), tau, counter)


def apply_homography(h, points) -> np.ndarray:
    """Map an (n, 2) array of points through a 3x3 homography."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    h = np.asarray(h, dtype=float)
    x = pts @ h[:2, :2].T + h[:2, 2]
    w = pts @ h[2, :2] + h[2, 2]
    return x / w[:, None]
