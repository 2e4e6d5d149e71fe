import numpy as np
import pytest

from pentaverify.matching import ImageExtent


def project(h, pts):
    """Homogeneous mapping, written independently of the package's helper."""
    pts = np.asarray(pts, dtype=float)
    hom = np.column_stack([pts, np.ones(len(pts))]) @ np.asarray(h).T
    return hom[:, :2] / hom[:, 2:]


def random_h(rng, max_cond=1e4, persp=1e-3):
    """Random well-conditioned homography acting on coordinates of order 1e2..1e3."""
    while True:
        a = rng.normal(size=(2, 2)) + np.eye(2) * 1.5
        if np.linalg.det(a) <= 0.2:
            continue
        h = np.eye(3)
        h[:2, :2] = a
        h[:2, 2] = rng.uniform(-200, 200, size=2)
        h[2, :2] = rng.uniform(-persp, persp, size=2)
        if np.linalg.cond(h) < max_cond:
            return h


def regular_pentagon(r=1.0, centre=(0.0, 0.0), phase=0.0):
    ang = phase + 2 * np.pi * np.arange(5) / 5
    return np.column_stack([centre[0] + r * np.cos(ang), centre[1] + r * np.sin(ang)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def extent900():
    return ImageExtent(900, 900)


def scene_pairs(lab, grid, seed=0, trials=1000):
    """Pentagon pairs sampled from a labelled scene, with each pair's plane label (or None)."""
    from pentaverify.matching import partition, sample_all_blocks

    ms = lab.match_set
    pairs = sample_all_blocks(ms, partition(ms, grid), 0.05, trials, seed=seed)
    labels = []
    for p in pairs:
        ls = set(lab.labels[list(p.indices)].tolist())
        labels.append(ls.pop() if len(ls) == 1 else None)
    return pairs, labels


def two_separate_planes(seed, outliers=0):
    """Two random planes in disjoint vertical strips of a 900x900 image."""
    from pentaverify.matching import ImageExtent
    from pentaverify.synth import PlaneSpec, SceneSpec, generate

    ext = ImageExtent(900, 900)
    planes = (PlaneSpec((10, 10, 350, 890), 120), PlaneSpec((550, 10, 890, 890), 120))
    return generate(SceneSpec(ext, ext, planes, outliers, 0.0, seed))


_acceptance_lines: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(n, ok, detail)``; returns ``ok``."""

    def record(n, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        _acceptance_lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
