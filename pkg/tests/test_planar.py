import itertools

import numpy as np
import pytest

from pentaverify.geometry import Pentagon, canonical_order, cr_vector
from pentaverify.matching import PentagonPair
from pentaverify.planar import (_mixed, _split_subsets, build_planar_groups,
                                reject_inconsistent_pentagons, try_merge)
from pentaverify.synth import corner_scene, generate, single_plane_scene

from conftest import project, regular_pentagon, scene_pairs, two_separate_planes

H = np.array([[0.9, 0.08, 30.0], [-0.06, 0.95, 15.0], [1e-4, -5e-5, 1.0]])


def _grid_pair(block, h=H, shift2=(0.0, 0.0)):
    """Regular pentagon centred in a 3x3 block of a 900x900 image, mapped by ``h``."""
    bx, by = block
    pts1 = regular_pentagon(60.0, (150.0 + 300 * bx, 150.0 + 300 * by), phase=0.3)
    pts1 = pts1[canonical_order(pts1)]
    pts2 = project(h, pts1) + shift2
    first = 5 * (3 * by + bx)
    return PentagonPair(tuple(range(first, first + 5)), Pentagon(tuple(map(tuple, pts1))),
                        Pentagon(tuple(map(tuple, pts2))), block)


CONSISTENT = [(1, 0), (2, 0), (0, 1), (1, 1), (2, 1), (0, 2)]


def test_global_homography_keeps_all():
    pairs = [_grid_pair(b) for b in CONSISTENT]
    kept, rejected = reject_inconsistent_pentagons(pairs)
    assert kept == pairs and rejected == []


def test_displaced_impostor_is_rejected():
    pairs = [_grid_pair(b) for b in CONSISTENT]
    # block (0, 0) pentagon whose image-2 copy sits in the opposite corner
    impostor = _grid_pair((0, 0), shift2=(620.0, 600.0))
    kept, rejected = reject_inconsistent_pentagons(pairs + [impostor])
    assert rejected == [impostor]
    assert kept == pairs


def test_reject_edge_cases():
    assert reject_inconsistent_pentagons([]) == ([], [])
    two = [_grid_pair((0, 0)), _grid_pair((2, 2), shift2=(-700.0, -700.0))]
    assert reject_inconsistent_pentagons(two) == (two, [])


def test_reject_without_blocks():
    # without block labels both axes are always compared, so use a map that
    # keeps equal coordinates equal
    h = np.array([[0.9, 0.0, 30.0], [0.0, 0.95, 15.0], [0.0, 0.0, 1.0]])
    strip = lambda p: PentagonPair(p.indices, p.pent1, p.pent2)
    pairs = [strip(_grid_pair(b, h)) for b in CONSISTENT]
    impostor = strip(_grid_pair((0, 0), h, shift2=(620.0, 600.0)))
    kept, rejected = reject_inconsistent_pentagons(pairs + [impostor])
    assert rejected == [impostor] and kept == pairs


@pytest.fixture(scope="module")
def plane_pairs():
    lab = generate(single_plane_scene(inliers=300, outliers=0, noise_sigma=0.0, seed=5))
    pairs, labels = scene_pairs(lab, 3, seed=5)
    assert len(pairs) == 9 and all(l == 0 for l in labels)
    return pairs


@pytest.fixture(scope="module")
def corner_pairs():
    lab = generate(corner_scene(inliers_per_plane=200, outliers=0, noise_sigma=0.0, seed=3))
    pairs, labels = scene_pairs(lab, 4, seed=3)
    assert None not in labels
    return pairs, labels


def test_same_plane_merges(plane_pairs, rng):
    for pa, pb in itertools.combinations(plane_pairs, 2):
        assert try_merge(pa, pb, 0.05, rng)


def test_self_copy_merges(plane_pairs, rng):
    pa = plane_pairs[0]
    copy = PentagonPair(pa.indices, pa.pent1, pa.pent2, pa.source_block)
    assert try_merge(pa, copy, 0.05, rng, mixes=1)


def _split_margin(pa, pb):
    """Smallest, over all splits, of the worst gate discrepancy among both mixed pentagons."""
    worst = []
    for sub in _split_subsets(3):
        d = 0.0
        for x, y in (_mixed(pa, pb, set(sub)), _mixed(pb, pa, set(sub))):
            a, b = np.array(cr_vector(x)), np.array(cr_vector(y))
            d = max(d, float(np.max(np.abs(a - b) / (a + b))))
        worst.append(d)
    return min(worst)


def test_cross_plane_does_not_merge(corner_pairs, rng):
    pairs, labels = corner_pairs
    cross = [(a, b) for a, la in zip(pairs, labels) for b, lb in zip(pairs, labels)
             if la == 0 and lb == 1]
    separated = [(a, b) for a, b in cross if _split_margin(a, b) > 0.05]
    # the fold is shared by both planes, so a few mixes can still look planar
    print(f"cross-plane pairs with every split beyond tau: {len(separated)}/{len(cross)}")
    assert len(separated) >= 0.9 * len(cross)
    for pa, pb in separated:
        assert not try_merge(pa, pb, 0.05, rng, mixes=10)


def test_groups_single_plane(plane_pairs, rng):
    groups = build_planar_groups(plane_pairs[:6], 0.05, rng)
    assert len(groups) == 1 and groups[0].pentagon_ids == tuple(range(6))
    assert groups[0].member_matches == tuple(sorted({i for p in plane_pairs[:6]
                                                     for i in p.indices}))


def test_groups_two_planes(corner_pairs, rng):
    pairs, labels = corner_pairs
    left = [p for p, l in zip(pairs, labels) if l == 0][:2]
    right = [p for p, l in zip(pairs, labels) if l == 1][:2]
    groups = build_planar_groups([left[0], right[0], left[1], right[1]], 0.05, rng)
    assert [g.pentagon_ids for g in groups] == [(0, 2), (1, 3)]


def test_groups_trivial(plane_pairs, rng):
    assert build_planar_groups([], 0.05, rng) == []
    groups = build_planar_groups(plane_pairs[:1], 0.05, rng)
    assert len(groups) == 1 and groups[0].pentagon_ids == (0,)


def _as_partition(groups, pairs):
    return {frozenset(pairs[i].indices for i in g.pentagon_ids) for g in groups}


def test_partition_and_order_robustness():
    for seed in range(3):
        pairs, labels = scene_pairs(two_separate_planes(seed), 5, seed=seed)
        expected = {frozenset(p.indices for p, l in zip(pairs, labels) if l == k)
                    for k in (0, 1)}
        rng = np.random.default_rng(seed)
        for trial in range(10):
            order = rng.permutation(len(pairs))
            shuffled = [pairs[i] for i in order]
            groups = build_planar_groups(shuffled, 0.05, np.random.default_rng(trial))
            ids = sorted(i for g in groups for i in g.pentagon_ids)
            assert ids == list(range(len(pairs)))
            assert _as_partition(groups, shuffled) == expected


def test_merge_symmetry(corner_pairs):
    pairs, _ = corner_pairs
    rng = np.random.default_rng(1)
    combos = list(itertools.combinations(pairs, 2))
    same = sum(try_merge(a, b, 0.05, rng) == try_merge(b, a, 0.05, rng) for a, b in combos)
    print(f"symmetric on {same}/{len(combos)} pairs")
    assert same / len(combos) >= 0.95


def test_bad_split_size(plane_pairs, rng):
    with pytest.raises(ValueError):
        try_merge(plane_pairs[0], plane_pairs[1], 0.05, rng, m=5)
