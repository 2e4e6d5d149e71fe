"""Synthetic two-view scenes with known plane homographies and per-match labels.

Labels use the plane index for inliers and ``OUTLIER`` (-1) for everything
else, including "near-miss" outliers placed 15-50 px from a plane's
prediction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleSpec, InvalidInput
from .geometry import apply_homography
from .homography import Homography
from .matching import ImageExtent, MatchSet

OUTLIER = -1
MAX_REDRAWS = 1000
# Keeps coordinates strictly inside the extent after rounding to 6 decimals.
EDGE_MARGIN = 1e-3
NEAR_MISS_RANGE = (15.0, 50.0)


@dataclass(frozen=True)
class PlaneSpec:
    region: tuple[float, float, float, float]  # x0, y0, x1, y1 in image 1
    inlier_count: int
    homography: np.ndarray | None = None  # drawn at random when None

    def __eq__(self, other):
        if not isinstance(other, PlaneSpec):
            return NotImplemented
        if (self.homography is None) != (other.homography is None):
            return False
        same_h = self.homography is None or np.array_equal(self.homography, other.homography)
        return (tuple(self.region) == tuple(other.region)
                and self.inlier_count == other.inlier_count and same_h)


@dataclass(frozen=True)
class SceneSpec:
    extent1: ImageExtent
    extent2: ImageExtent
    planes: tuple[PlaneSpec, ...]
    outlier_count: int = 0
    noise_sigma: float = 0.0
    seed: int = 0
    near_miss_count: int = 0

    def __post_init__(self):
        object.__setattr__(self, "planes", tuple(self.planes))
        if self.outlier_count < 0 or self.near_miss_count < 0 or self.noise_sigma < 0:
            raise InvalidInput("counts and noise must be non-negative")
        if self.near_miss_count and not self.planes:
            raise InvalidInput("near-miss outliers need at least one plane")
        for p in self.planes:
            x0, y0, x1, y1 = p.region
            if p.inlier_count < 0:
                raise InvalidInput("inlier_count must be non-negative")
            if not (0 <= x0 < x1 <= self.extent1.width and 0 <= y0 < y1 <= self.extent1.height):
                raise InvalidInput(f"plane region {p.region} outside image 1")


@dataclass(frozen=True, eq=False)
class LabeledMatchSet:
    match_set: MatchSet
    labels: np.ndarray
    homographies: tuple[Homography, ...]

    def inlier_mask(self) -> np.ndarray:
        return self.labels != OUTLIER


def _corners(region):
    x0, y0, x1, y1 = region
    return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]], dtype=float)


def _sampled(region, extent):
    """The part of ``region`` points are drawn from: pulled off the open far edges."""
    x0, y0, x1, y1 = region
    return x0, y0, min(x1, extent.width - EDGE_MARGIN), min(y1, extent.height - EDGE_MARGIN)


def _inside(pts, extent, margin=EDGE_MARGIN):
    return bool(np.all((pts >= 0) & (pts[:, :1] < extent.width - margin)
                       & (pts[:, 1:] < extent.height - margin)))


def random_homography(rng: np.random.Generator, region, extent2: ImageExtent,
                      max_cond: float = 1e4, max_rotation: float = 30.0,
                      scale_range=(0.5, 2.0)) -> np.ndarray:
    """Draw a plane homography mapping ``region`` into ``extent2``.

    Composition of a rotation (default within +-30 degrees), per-axis scale
    (default in [0.5, 2]), small perspective terms (at most 1e-3 per pixel
    about the region centre) and a translation. Redrawn until the region's corners land inside
    image 2 and the matrix condition number is below ``max_cond``.
    """
    corners = _corners(region)
    centre = corners.mean(axis=0)
    to_origin = np.array([[1, 0, -centre[0]], [0, 1, -centre[1]], [0, 0, 1.0]])
    for _ in range(MAX_REDRAWS):
        theta = math.radians(rng.uniform(-max_rotation, max_rotation))
        sx, sy = np.exp(rng.uniform(*np.log(scale_range), size=2))
        g, h = rng.uniform(-1e-3, 1e-3, size=2)
        persp = np.array([[1, 0, 0], [0, 1, 0], [g, h, 1.0]])
        c, s = math.cos(theta), math.sin(theta)
        lin = np.array([[c * sx, -s * sy, 0], [s * sx, c * sy, 0], [0, 0, 1.0]])
        hm = lin @ persp @ to_origin
        w = corners @ hm[2, :2] + hm[2, 2]
        if np.min(w) < 0.25:
            continue
        # Translation is drawn from the range that keeps the mapped region inside image 2.
        mapped = apply_homography(hm, corners)
        lo = -mapped.min(axis=0)
        hi = np.array([extent2.width, extent2.height]) - EDGE_MARGIN - mapped.max(axis=0)
        if np.any(hi <= lo):
            continue
        t = rng.uniform(lo, hi)
        hm = np.array([[1, 0, t[0]], [0, 1, t[1]], [0, 0, 1.0]]) @ hm
        if np.linalg.cond(hm) >= max_cond:
            continue
        if _inside(apply_homography(hm, corners), extent2):
            return hm
    raise InfeasibleSpec(f"no homography maps region {region} inside image 2")


def generate(spec: SceneSpec) -> LabeledMatchSet:
    """Draw inliers on every plane, then outliers, and shuffle them together."""
    rng = np.random.default_rng(spec.seed)
    e1, e2 = spec.extent1, spec.extent2
    sigma = spec.noise_sigma

    homs = []
    for plane in spec.planes:
        if plane.homography is None:
            hm = random_homography(rng, plane.region, e2)
        else:
            hm = np.asarray(plane.homography, dtype=float)
            corners = apply_homography(hm, _corners(_sampled(plane.region, e1)))
            if not _inside(corners, e2, margin=0.0):
                raise InfeasibleSpec(f"plane region {plane.region} maps outside image 2")
        homs.append(hm)

    p1, p2, labels = [], [], []

    def draw_point(region):
        x0, y0, x1, y1 = _sampled(region, e1)
        return rng.uniform([x0, y0], [x1, y1])

    for k, (plane, hm) in enumerate(zip(spec.planes, homs)):
        for _ in range(plane.inlier_count):
            for _ in range(MAX_REDRAWS):
                a = draw_point(plane.region)
                b = apply_homography(hm, a)[0]
                if sigma > 0:
                    noise = rng.normal(0.0, sigma, size=2)
                    if np.hypot(*noise) > 3 * sigma:
                        continue
                    b = b + noise
                if _inside(b[None], e2):
                    break
            else:
                raise InfeasibleSpec(f"cannot place an inlier of plane {k} inside image 2")
            p1.append(a)
            p2.append(b)
            labels.append(k)

    for j in range(spec.near_miss_count):
        k = j % len(homs)
        for _ in range(MAX_REDRAWS):
            a = draw_point(spec.planes[k].region)
            r = rng.uniform(*NEAR_MISS_RANGE)
            phi = rng.uniform(0, 2 * np.pi)
            b = apply_homography(homs[k], a)[0] + r * np.array([np.cos(phi), np.sin(phi)])
            if _inside(b[None], e2):
                break
        else:
            raise InfeasibleSpec("cannot place a near-miss outlier inside image 2")
        p1.append(a)
        p2.append(b)
        labels.append(OUTLIER)

    for _ in range(spec.outlier_count):
        p1.append(draw_point((0, 0, e1.width, e1.height)))
        p2.append(rng.uniform([0, 0], [e2.width - EDGE_MARGIN, e2.height - EDGE_MARGIN]))
        labels.append(OUTLIER)

    order = rng.permutation(len(labels))
    p1 = np.reshape(p1, (-1, 2))[order]
    p2 = np.reshape(p2, (-1, 2))[order]
    labels = np.asarray(labels, dtype=int).reshape(-1)[order]
    ms = MatchSet(e1, e2, p1, p2)
    return LabeledMatchSet(ms, labels, tuple(Homography(h) for h in homs))


def single_plane_scene(inliers=200, outliers=200, noise_sigma=0.5, seed=0,
                       size=(900, 900)) -> SceneSpec:
    """One random plane covering most of image 1, plus uniform outliers."""
    w, h = size
    ext = ImageExtent(w, h)
    region = (0.05 * w, 0.05 * h, 0.95 * w, 0.95 * h)
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(7,)))
    # A plane this large only fits image 2 under a mild, slightly shrinking map.
    hm = random_homography(rng, region, ext, max_rotation=20.0, scale_range=(0.55, 0.85))
    return SceneSpec(ext, ext, (PlaneSpec(region, inliers, hm),), outliers, noise_sigma, seed)


def plane_induced_homography(k1, k2, r, t, normal, distance) -> np.ndarray:
    """Homography of the plane ``normal . X = distance`` (camera-1 frame) for a second
    camera at ``X2 = r X + t``."""
    n = np.asarray(normal, dtype=float).reshape(3, 1)
    t = np.asarray(t, dtype=float).reshape(3, 1)
    return k2 @ (r + t @ n.T / distance) @ np.linalg.inv(k1)


def corner_homographies(size=(900, 900), dihedral_deg=90.0, depth=5.0, yaw_deg=6.0,
                        baseline=(1.25, 0.15, 0.0), focal=900.0, fold=0.5):
    """Homographies of two vertical walls meeting along a line in front of camera 1.

    The fold projects to the vertical line ``x = fold * width`` of image 1;
    the left wall lies to its left and the right wall to its right.
    """
    w, h = size
    k = np.array([[focal, 0, fold * w], [0, focal, h / 2], [0, 0, 1.0]])
    alpha = math.radians(90.0 - dihedral_deg / 2)
    n_left = np.array([math.sin(alpha), 0.0, math.cos(alpha)])
    n_right = np.array([-math.sin(alpha), 0.0, math.cos(alpha)])
    d = depth * math.cos(alpha)
    b = math.radians(yaw_deg)
    r = np.array([[math.cos(b), 0, math.sin(b)], [0, 1, 0], [-math.sin(b), 0, math.cos(b)]])
    t = -r @ np.asarray(baseline, dtype=float)
    return (plane_induced_homography(k, k, r, t, n_left, d),
            plane_induced_homography(k, k, r, t, n_right, d))


def corner_scene(inliers_per_plane=150, outliers=100, noise_sigma=0.5, seed=0,
                 size=(900, 900), fold=0.5, gap=0.0, **pose) -> SceneSpec:
    """Two-wall corner: plane 0 left of the fold in image 1, plane 1 right of it.

    ``gap`` (a fraction of the width) leaves a point-free strip around the fold.
    """
    w, h = size
    ext = ImageExtent(w, h)
    h_left, h_right = corner_homographies(size, fold=fold, **pose)
    m = 0.05
    left = (m * w, m * h, (fold - gap / 2) * w, (1 - m) * h)
    right = ((fold + gap / 2) * w, m * h, (1 - m) * w, (1 - m) * h)
    planes = (PlaneSpec(left, inliers_per_plane, h_left),
              PlaneSpec(right, inliers_per_plane, h_right))
    return SceneSpec(ext, ext, planes, outliers, noise_sigma, seed)
