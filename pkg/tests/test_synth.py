import numpy as np
import pytest

from pentaverify.errors import InfeasibleSpec, InvalidInput
from pentaverify.matching import ImageExtent
from pentaverify.pipeline import STATUS_NO_PLANE, Config, run
from pentaverify.synth import (NEAR_MISS_RANGE, OUTLIER, PlaneSpec, SceneSpec, corner_scene,
                               generate, random_homography, single_plane_scene)

from conftest import two_separate_planes

E = ImageExtent(900, 900)


def test_identity_plane():
    spec = SceneSpec(E, E, (PlaneSpec((0, 0, 900, 900), 10, np.eye(3)),), 0, 0.0, 0)
    lab = generate(spec)
    np.testing.assert_array_equal(lab.match_set.p1, lab.match_set.p2)
    assert (lab.labels == 0).all()


@pytest.mark.parametrize("spec", [single_plane_scene(seed=3),
                                  corner_scene(seed=2),
                                  single_plane_scene(noise_sigma=2.0, seed=5)])
def test_label_fidelity(spec):
    lab = generate(spec)
    ms = lab.match_set
    assert len(lab.labels) == len(ms)
    for k, h in enumerate(lab.homographies):
        idx = lab.labels == k
        err = np.linalg.norm(h(ms.p1[idx]) - ms.p2[idx], axis=1)
        assert err.max() <= 3 * spec.noise_sigma + 1e-6
    inliers = sum(p.inlier_count for p in spec.planes)
    assert np.sum(lab.labels == OUTLIER) == len(ms) - inliers


def test_seed_determinism():
    a, b = generate(single_plane_scene(seed=7)), generate(single_plane_scene(seed=7))
    assert a.match_set == b.match_set
    np.testing.assert_array_equal(a.labels, b.labels)
    c = generate(single_plane_scene(seed=8))
    assert a.match_set != c.match_set


def test_labels_are_shuffled():
    lab = generate(single_plane_scene(inliers=100, outliers=100, seed=1))
    assert not (lab.labels[:100] == 0).all()


def test_near_miss_outliers():
    h = random_homography(np.random.default_rng(0), (100, 100, 800, 800), E,
                          scale_range=(0.6, 0.9))
    spec = SceneSpec(E, E, (PlaneSpec((100, 100, 800, 800), 0, h),), 0, 0.0, 0,
                     near_miss_count=50)
    lab = generate(spec)
    err = np.linalg.norm(lab.homographies[0](lab.match_set.p1) - lab.match_set.p2, axis=1)
    assert (lab.labels == OUTLIER).all()
    assert err.min() >= NEAR_MISS_RANGE[0] - 1e-9 and err.max() <= NEAR_MISS_RANGE[1] + 1e-9


def test_random_homography_constraints():
    rng = np.random.default_rng(0)
    region = (50, 50, 850, 850)
    for _ in range(50):
        h = random_homography(rng, region, E)
        assert np.linalg.cond(h) < 1e4
        x0, y0, x1, y1 = region
        corners = np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]], dtype=float)
        hom = np.column_stack([corners, np.ones(4)]) @ h.T
        mapped = hom[:, :2] / hom[:, 2:]
        assert E.contains(mapped).all()


def test_infeasible_and_invalid_specs():
    with pytest.raises(InfeasibleSpec):
        random_homography(np.random.default_rng(0), (0, 0, 900, 900), ImageExtent(50, 50))
    shifted = np.array([[1, 0, 500.0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(InfeasibleSpec):
        generate(SceneSpec(E, E, (PlaneSpec((0, 0, 800, 800), 5, shifted),), 0, 0.0, 0))
    with pytest.raises(InvalidInput):
        SceneSpec(E, E, (PlaneSpec((0, 0, 1000, 800), 5),), 0, 0.0, 0)
    with pytest.raises(InvalidInput):
        SceneSpec(E, E, (), -1, 0.0, 0)
    with pytest.raises(InvalidInput):
        SceneSpec(E, E, (), 0, 0.0, 0, near_miss_count=3)


def test_two_planes_recover_pure_groups():
    for seed in range(3):
        lab = two_separate_planes(seed)
        r = run(lab.match_set, Config(seed=seed, grid_n=5))
        assert len(r.groups) == 2
        for g in r.groups:
            assert len(set(lab.labels[list(g.member_matches)].tolist())) == 1


@pytest.mark.slow
def test_pure_outliers_find_no_plane():
    hits = 0
    for seed in range(100):
        lab = generate(SceneSpec(E, E, (), 50, 0.0, seed))
        hits += run(lab.match_set, Config(seed=seed)).status == STATUS_NO_PLANE
    print(f"NoPlaneFound in {hits}/100 runs")
    assert hits >= 95
