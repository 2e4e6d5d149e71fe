"""Match sets, grid blocking of image 1, and randomized per-block pentagon sampling."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .errors import BoundsError, DegenerateConfiguration, InsufficientPoints, InvalidInput
from .geometry import GateCounter, Pentagon


@dataclass(frozen=True)
class ImageExtent:
    width: int
    height: int

    def __post_init__(self):
        if int(self.width) != self.width or int(self.height) != self.height:
            raise InvalidInput(f"extent must be integral, got {self.width}x{self.height}")
        if self.width < 1 or self.height < 1:
            raise InvalidInput(f"extent must be positive, got {self.width}x{self.height}")

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def contains(self, pts: np.ndarray) -> np.ndarray:
        """Mask of points inside ``[0, width) x [0, height)``."""
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        return ((pts[:, 0] >= 0) & (pts[:, 0] < self.width)
                & (pts[:, 1] >= 0) & (pts[:, 1] < self.height))


@dataclass(frozen=True, eq=False)
class MatchSet:
    """Initial correspondences ``p1[i] <-> p2[i]`` between two images."""

    extent1: ImageExtent
    extent2: ImageExtent
    p1: np.ndarray
    p2: np.ndarray

    def __post_init__(self):
        p1 = np.asarray(self.p1, dtype=float).reshape(-1, 2)
        p2 = np.asarray(self.p2, dtype=float).reshape(-1, 2)
        if len(p1) != len(p2):
            raise InvalidInput(f"{len(p1)} image-1 points but {len(p2)} image-2 points")
        if not (np.isfinite(p1).all() and np.isfinite(p2).all()):
            raise InvalidInput("match coordinates must be finite")
        for pts, ext, name in ((p1, self.extent1, "p1"), (p2, self.extent2, "p2")):
            bad = np.flatnonzero(~ext.contains(pts))
            if len(bad):
                i = int(bad[0])
                raise BoundsError(
                    f"match {i}: {name}={tuple(pts[i])} outside {ext.width}x{ext.height}")
        p1.setflags(write=False)
        p2.setflags(write=False)
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)

    @classmethod
    def from_pairs(cls, extent1, extent2, pairs) -> "MatchSet":
        pairs = list(pairs)
        p1 = [a for a, _ in pairs]
        p2 = [b for _, b in pairs]
        return cls(extent1, extent2, np.reshape(p1, (-1, 2)), np.reshape(p2, (-1, 2)))

    def __len__(self):
        return len(self.p1)

    def __eq__(self, other):
        if not isinstance(other, MatchSet):
            return NotImplemented
        return (self.extent1 == other.extent1 and self.extent2 == other.extent2
                and np.array_equal(self.p1, other.p1) and np.array_equal(self.p2, other.p2))

    @property
    def min_sep1(self) -> float:
        return geometry.SEPARATION_REL * self.extent1.diagonal

    @property
    def min_sep2(self) -> float:
        return geometry.SEPARATION_REL * self.extent2.diagonal


@dataclass(frozen=True, eq=False)
class GridPartition:
    n: int
    extent: ImageExtent
    block_of: np.ndarray  # (len(matches), 2) int array of (bx, by)

    def blocks(self) -> dict[tuple[int, int], list[int]]:
        """Match indices per non-empty block, blocks in row-major order."""
        out: dict[tuple[int, int], list[int]] = {}
        order = np.lexsort((np.arange(len(self.block_of)),
                            self.block_of[:, 0], self.block_of[:, 1]))
        for i in order:
            bx, by = self.block_of[i]
            out.setdefault((int(bx), int(by)), []).append(int(i))
        return out

    def block_rect(self, block) -> tuple[float, float, float, float]:
        """``(x0, y0, x1, y1)`` of a block, half-open on the far edges."""
        bx, by = block
        w, h = self.extent.width, self.extent.height
        return bx * w / self.n, by * h / self.n, (bx + 1) * w / self.n, (by + 1) * h / self.n


def partition(ms: MatchSet, n: int) -> GridPartition:
    """Assign every match to an ``n x n`` block of image 1 by its image-1 position."""
    if n < 1:
        raise InvalidInput(f"grid size must be >= 1, got {n}")
    w, h = ms.extent1.width, ms.extent1.height
    bx = np.minimum(np.floor(ms.p1[:, 0] * n / w), n - 1).astype(int)
    by = np.minimum(np.floor(ms.p1[:, 1] * n / h), n - 1).astype(int)
    return GridPartition(n, ms.extent1, np.stack([bx, by], axis=1).reshape(-1, 2))


@dataclass(frozen=True)
class PentagonPair:
    """Five matches forming a shape-matched pentagon in each image."""

    indices: tuple[int, ...]
    pent1: Pentagon
    pent2: Pentagon
    source_block: tuple[int, int] | None = None

    @property
    def centroid1(self):
        return self.pent1.centroid

    @property
    def centroid2(self):
        return self.pent2.centroid


def orientations_agree(pts1, pts2) -> bool:
    """True if every vertex triple keeps (or every triple flips) its orientation.

    A homography either preserves the orientation of all triangles in the
    visible part of the image or reverses all of them, so any mixture marks
    a correspondence no plane can produce.
    """
    s = None
    for i, j, k in geometry._TRIPLES:
        x0, y0 = pts1[i]
        c1 = (pts1[j][0] - x0) * (pts1[k][1] - y0) - (pts1[j][1] - y0) * (pts1[k][0] - x0)
        x0, y0 = pts2[i]
        c2 = (pts2[j][0] - x0) * (pts2[k][1] - y0) - (pts2[j][1] - y0) * (pts2[k][0] - x0)
        same = (c1 > 0) == (c2 > 0)
        if s is None:
            s = same
        elif same != s:
            return False
    return True


def shape_match_points(pts1, pts2, tau, min_sep1=0.0, min_sep2=0.0,
                       counter: GateCounter | None = None, orientation_check=False) -> bool:
    """Shape test on raw vertex lists that are already in corresponding order.

    Degenerate vertex sets and (optionally) orientation mismatches fail
    without reaching the cross-ratio gates.
    """
    try:
        geometry.check_pentagon(pts1, min_sep1)
        geometry.check_pentagon(pts2, min_sep2)
    except DegenerateConfiguration:
        return False
    if orientation_check and not orientations_agree(pts1, pts2):
        return False
    return geometry.vectors_match(geometry.cr_vector(pts1), geometry.cr_vector(pts2),
                                  tau, counter)


def make_pair(ms: MatchSet, indices, block=None) -> PentagonPair:
    """Build a pair from five match indices, canonically ordered in image 1."""
    idx = np.asarray(indices)
    order = geometry.canonical_order(ms.p1[idx])
    idx = tuple(int(i) for i in idx[order])
    pent1 = Pentagon(tuple(map(tuple, ms.p1[list(idx)])), ms.min_sep1)
    pent2 = Pentagon(tuple(map(tuple, ms.p2[list(idx)])), ms.min_sep2)
    return PentagonPair(idx, pent1, pent2, block)


def sample_block_pentagon(ms: MatchSet, block_indices, tau: float, trial_count: int,
                          rng: np.random.Generator, counter: GateCounter | None = None,
                          orientation_check: bool = True,
                          block=None) -> PentagonPair | None:
    """Draw random quintuples from one block until one is shape-matched.

    Every draw consumes one of ``trial_count`` trials, degenerate ones
    included. Returns None when the budget runs out.
    """
    block_indices = np.asarray(block_indices, dtype=int)
    k = len(block_indices)
    if k < 5:
        raise InsufficientPoints(f"block has {k} matches, need 5")
    p1 = ms.p1.tolist()
    p2 = ms.p2.tolist()
    sep1, sep2 = ms.min_sep1, ms.min_sep2
    for _ in range(trial_count):
        pick = block_indices[rng.choice(k, 5, replace=False)]
        pts = [p1[i] for i in pick]
        order = geometry.canonical_order(pts)
        pick = pick[order]
        pts1 = [p1[i] for i in pick]
        pts2 = [p2[i] for i in pick]
        if shape_match_points(pts1, pts2, tau, sep1, sep2, counter, orientation_check):
            return make_pair(ms, pick, block)
    return None


def block_rng(seed: int, block) -> np.random.Generator:
    """Independent random stream for one block, so results never depend on scheduling."""
    bx, by = block
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0, bx, by)))


def sample_all_blocks(ms: MatchSet, gp: GridPartition, tau: float, trial_count: int,
                      per_block_pentagons: int = 1, seed: int = 0,
                      counter: GateCounter | None = None, orientation_check: bool = True,
                      workers: int = 1) -> list[PentagonPair]:
    """Sample up to ``per_block_pentagons`` matched pentagons in every block.

    Output is ordered by block (row-major) and then by discovery, and is the
    same for any ``workers`` count.
    """
    blocks = list(gp.blocks().items())

    def work(item):
        block, indices = item
        local = GateCounter()
        found = []
        if len(indices) >= 5:
            rng = block_rng(seed, block)
            for _ in range(per_block_pentagons):
                pair = sample_block_pentagon(ms, indices, tau, trial_count, rng, local,
                                             orientation_check, block)
                if pair is None:
                    break
                found.append(pair)
        return found, local.count

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(work, blocks))
    else:
        results = [work(b) for b in blocks]

    pairs = []
    for found, n_gates in results:
        pairs.extend(found)
        if counter is not None:
            counter.count += n_gates
    return pairs
