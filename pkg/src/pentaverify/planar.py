"""Reject inconsistent pentagon pairs and merge the rest into coplanar groups."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import geometry
from .geometry import GateCounter
from .matching import PentagonPair, shape_match_points


@dataclass(frozen=True)
class PlanarGroup:
    id: int
    pentagon_ids: tuple[int, ...]
    member_matches: tuple[int, ...]
    homography: object = None  # Homography, once fitted


def _sign(v: float) -> int:
    return (v > 0) - (v < 0)


def reject_inconsistent_pentagons(pairs, gp=None):
    """Drop pentagon pairs whose image-2 placement contradicts the others.

    For every two pentagons, the left/right and above/below relation of
    their centroids in image 1 should survive into image 2. A pentagon that
    is contradicted by more than half of its peers is rejected. When ``gp``
    is given (or the pairs carry source blocks) an axis is only compared if
    the two pentagons come from different block columns (for x) or rows
    (for y), so neighbours in one row are not judged on a small vertical
    offset.

    Returns ``(kept, rejected)``, both in input order.
    """
    pairs = list(pairs)
    k = len(pairs)
    if k <= 2:
        return pairs, []
    c1 = [p.centroid1 for p in pairs]
    c2 = [p.centroid2 for p in pairs]
    use_blocks = all(p.source_block is not None for p in pairs)
    inverted = [0] * k
    for i, j in combinations(range(k), 2):
        bad = False
        for axis in (0, 1):
            if use_blocks and pairs[i].source_block[axis] == pairs[j].source_block[axis]:
                continue
            s1 = _sign(c1[j][axis] - c1[i][axis])
            s2 = _sign(c2[j][axis] - c2[i][axis])
            if s1 != s2:
                bad = True
        if bad:
            inverted[i] += 1
            inverted[j] += 1
    kept, rejected = [], []
    for p, n_bad in zip(pairs, inverted):
        (rejected if 2 * n_bad > k - 1 else kept).append(p)
    return kept, rejected


def _split_subsets(m: int):
    return list(combinations(range(5), m))


def _mixed(pa: PentagonPair, pb: PentagonPair, from_a):
    """Vertices of ``pa`` at slots ``from_a`` plus ``pb`` elsewhere, canonically re-ordered."""
    pts1, pts2 = [], []
    for s in range(5):
        src = pa if s in from_a else pb
        pts1.append(src.pent1.vertices[s])
        pts2.append(src.pent2.vertices[s])
    order = geometry.canonical_order(pts1)
    return [pts1[i] for i in order], [pts2[i] for i in order]


def try_merge(pa: PentagonPair, pb: PentagonPair, tau: float, rng: np.random.Generator,
              mixes: int = 5, m: int = 3, second: bool = True,
              counter: GateCounter | None = None, orientation_check: bool = True) -> bool:
    """Test whether two matched pentagons lie on one plane by swapping vertices.

    Each split takes ``m`` vertex slots from ``pa`` and the other ``5 - m``
    from ``pb``; with ``second`` the complementary pentagon is formed too.
    The pair merges as soon as one split yields shape-matched pentagons.
    """
    if not 1 <= m <= 4:
        raise ValueError(f"m must be in [1, 4], got {m}")
    subsets = _split_subsets(m)
    picks = rng.choice(len(subsets), size=min(mixes, len(subsets)), replace=False)
    sep1, sep2 = pa.pent1.min_sep, pa.pent2.min_sep
    for p in picks:
        from_a = set(subsets[p])
        a1, a2 = _mixed(pa, pb, from_a)
        if not shape_match_points(a1, a2, tau, sep1, sep2, counter, orientation_check):
            continue
        if second:
            b1, b2 = _mixed(pb, pa, from_a)
            if not shape_match_points(b1, b2, tau, sep1, sep2, counter, orientation_check):
                continue
        return True
    return False


def build_planar_groups(pairs, tau: float, rng: np.random.Generator, mixes: int = 5,
                        m: int = 3, second: bool = True, counter: GateCounter | None = None,
                        orientation_check: bool = True) -> list[PlanarGroup]:
    """Greedy first-fit grouping; each group is represented by its founding pentagon."""
    founders: list[int] = []
    members: list[list[int]] = []
    for i, pair in enumerate(pairs):
        for g, f in enumerate(founders):
            if try_merge(pairs[f], pair, tau, rng, mixes, m, second, counter,
                         orientation_check):
                members[g].append(i)
                break
        else:
            founders.append(i)
            members.append([i])
    groups = []
    for g, ids in enumerate(members):
        matches = sorted({j for i in ids for j in pairs[i].indices})
        groups.append(PlanarGroup(g, tuple(ids), tuple(matches)))
    return groups
