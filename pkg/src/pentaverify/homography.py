"""Per-group homography fitting (normalized DLT) and reprojection classification."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from . import geometry
from .errors import DegenerateConfiguration, NumericalFailure

log = logging.getLogger(__name__)

DET_EPS = 1e-12
# Ratio of the two smallest singular values above which the null direction is ambiguous.
ISOLATION_RATIO = 0.99


@dataclass(frozen=True, eq=False)
class Homography:
    """Image-1 to image-2 projective map with unit Frobenius norm and ``m[2,2] >= 0``."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float).reshape(3, 3)
        norm = np.linalg.norm(m)
        if not np.isfinite(norm) or norm == 0.0:
            raise NumericalFailure("homography matrix is zero or non-finite")
        # Already-normalized input is kept bit-for-bit so serialization round-trips exactly.
        if abs(norm - 1.0) > 4 * np.finfo(float).eps:
            m = m / norm
        if m[2, 2] < 0 or (m[2, 2] == 0 and m[np.nonzero(m)][0] < 0):
            m = -m
        if abs(np.linalg.det(m)) <= DET_EPS:
            raise NumericalFailure("homography is singular")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def __eq__(self, other):
        if not isinstance(other, Homography):
            return NotImplemented
        return np.array_equal(self.m, other.m)

    def __call__(self, points) -> np.ndarray:
        return geometry.apply_homography(self.m, points)


def hartley_normalize(pts: np.ndarray):
    """Similarity taking points to zero mean and mean distance sqrt(2)."""
    c = pts.mean(axis=0)
    d = np.mean(np.linalg.norm(pts - c, axis=1))
    if d == 0.0:
        raise DegenerateConfiguration("points are coincident")
    s = np.sqrt(2) / d
    t = np.array([[s, 0, -s * c[0]], [0, s, -s * c[1]], [0, 0, 1.0]])
    return (pts - c) * s, t


def _check_general_position(pts: np.ndarray):
    diam2 = max(np.sum((a - b) ** 2) for a, b in combinations(pts, 2))
    eps = geometry.COLLINEAR_REL * diam2
    if len(pts) == 4:
        for i, j, k in combinations(range(4), 3):
            u, v = pts[j] - pts[i], pts[k] - pts[i]
            if abs(u[0] * v[1] - u[1] * v[0]) < eps:
                raise DegenerateConfiguration("three of four points are collinear")
    else:
        # Larger sets only need to span the plane; the SVD isolation test catches the rest.
        centred = pts - pts.mean(axis=0)
        sv = np.linalg.svd(centred, compute_uv=False)
        if sv[-1] * sv[0] < eps:
            raise DegenerateConfiguration("points are collinear")


def estimate_homography(p1, p2) -> Homography:
    """Least-squares DLT from >= 4 correspondences with Hartley conditioning."""
    p1 = np.asarray(p1, dtype=float).reshape(-1, 2)
    p2 = np.asarray(p2, dtype=float).reshape(-1, 2)
    n = len(p1)
    if n < 4 or len(p2) != n:
        raise DegenerateConfiguration(f"need >= 4 correspondences, got {n}")
    _check_general_position(p1)
    x1, t1 = hartley_normalize(p1)
    x2, t2 = hartley_normalize(p2)

    a = np.zeros((2 * n, 9))
    x, y = x1[:, 0], x1[:, 1]
    u, v = x2[:, 0], x2[:, 1]
    a[0::2, 0], a[0::2, 1], a[0::2, 2] = -x, -y, -1
    a[0::2, 6], a[0::2, 7], a[0::2, 8] = u * x, u * y, u
    a[1::2, 3], a[1::2, 4], a[1::2, 5] = -x, -y, -1
    a[1::2, 6], a[1::2, 7], a[1::2, 8] = v * x, v * y, v

    _, s, vt = np.linalg.svd(a, full_matrices=True)
    s = np.concatenate([s, np.zeros(9 - len(s))])
    if s[-2] == 0.0 or s[-1] / s[-2] > ISOLATION_RATIO:
        raise NumericalFailure("smallest singular direction is not isolated")
    hn = vt[-1].reshape(3, 3)
    return Homography(np.linalg.inv(t2) @ hn @ t1)


def reprojection_errors(h: Homography, p1, p2) -> np.ndarray:
    """Distance in image 2 between observed points and their predictions.

    Points mapped to (or beyond) the line at infinity get an infinite error.
    """
    p1 = np.asarray(p1, dtype=float).reshape(-1, 2)
    p2 = np.asarray(p2, dtype=float).reshape(-1, 2)
    m = h.m
    w = p1 @ m[2, :2] + m[2, 2]
    xy = p1 @ m[:2, :2].T + m[:2, 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        pred = xy / w[:, None]
        err = np.linalg.norm(pred - p2, axis=1)
    err[~np.isfinite(err)] = np.inf
    return err


def fit_group_homographies(groups, ms) -> list:
    """Fill in each group's homography from its member matches; drop groups that fail."""
    out = []
    for g in groups:
        idx = list(g.member_matches)
        try:
            h = estimate_homography(ms.p1[idx], ms.p2[idx])
        except (DegenerateConfiguration, NumericalFailure) as exc:
            log.warning("dropping planar group %d (%d matches): %s", g.id, len(idx), exc)
            continue
        out.append(replace(g, homography=h))
    return out


@dataclass(frozen=True)
class MatchVerdict:
    """Outcome for one match: ``group_id`` is None when the match is incorrect.

    ``error`` is the reprojection error under the accepting group, or the
    smallest error over all groups for an incorrect match (None if there
    were no groups at all).
    """

    match_index: int
    group_id: int | None
    error: float | None

    @property
    def correct(self) -> bool:
        return self.group_id is not None


def classify_matches(ms, groups, pixel_threshold: float = 10.0) -> list[MatchVerdict]:
    """Attach each match to the group predicting it best, if within ``pixel_threshold``."""
    if pixel_threshold <= 0:
        raise ValueError("pixel_threshold must be positive")
    n = len(ms)
    if not groups:
        return [MatchVerdict(i, None, None) for i in range(n)]
    # Rows ordered by group id so argmin breaks exact ties towards the lower id.
    groups = sorted(groups, key=lambda g: g.id)
    errs = np.stack([reprojection_errors(g.homography, ms.p1, ms.p2) for g in groups])
    best = np.argmin(errs, axis=0)
    best_err = errs[best, np.arange(n)]
    out = []
    for i in range(n):
        e = float(best_err[i])
        gid = groups[best[i]].id if e <= pixel_threshold else None
        out.append(MatchVerdict(i, gid, e))
    return out
