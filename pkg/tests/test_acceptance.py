"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line."""

import time

import numpy as np

from pentaverify import io
from pentaverify.bench import benchmark_costs
from pentaverify.cli import main, score
from pentaverify.errors import DegenerateConfiguration
from pentaverify.geometry import Pentagon, apply_homography, cr_gate, pentagon_cross_ratios
from pentaverify.homography import Homography, estimate_homography, reprojection_errors
from pentaverify.matching import ImageExtent
from pentaverify.pipeline import Config, run
from pentaverify.synth import (OUTLIER, corner_scene, generate, random_homography,
                               single_plane_scene)

from conftest import project, random_h

SEEDS = range(20)


def _valid_pentagon(rng):
    while True:
        try:
            return Pentagon.canonical(rng.uniform(0, 500, size=(5, 2)))
        except DegenerateConfiguration:
            pass


def test_1_projective_invariance(criterion):
    rng = np.random.default_rng(1)
    worst = 0.0
    t0 = time.perf_counter()
    for _ in range(10_000):
        p = _valid_pentagon(rng)
        h = random_h(rng, max_cond=1e4)
        q = Pentagon(tuple(map(tuple, project(h, p.array))))
        a, b = pentagon_cross_ratios(p), pentagon_cross_ratios(q)
        worst = max(worst, float(np.max(np.abs(a - b) / np.abs(a))))
    dt = time.perf_counter() - t0
    assert criterion(1, worst < 1e-9 and dt < 5.0,
                     f"10,000 pentagons, worst relative error {worst:.2e} (< 1e-9), "
                     f"{dt:.2f} s (< 5 s)")


def test_2_gate_arithmetic(criterion):
    cases = [(1.0, 1.0, True), (1.0, 1.1, True), (1.0, 1.2, False)]
    got = [cr_gate(x, y, 0.05) for x, y, _ in cases]
    ok = all(g is want for g, (_, _, want) in zip(got, cases))
    detail = ", ".join(f"({x}, {y}) -> {'pass' if g else 'fail'}"
                       for g, (x, y, _) in zip(got, cases))
    assert criterion(2, ok, f"gate at 5%: {detail} (expected pass, pass, fail)")


def test_3_single_plane_recovery(criterion):
    recall, rejection = [], []
    t0 = time.perf_counter()
    for seed in SEEDS:
        lab = generate(single_plane_scene(seed=seed))
        s = score(run(lab.match_set, Config(seed=seed)), lab.labels)
        recall.append(s["recall"])
        rejection.append(s["outlier_rejection"])
    dt = time.perf_counter() - t0
    r, o = float(np.mean(recall)), float(np.mean(rejection))
    assert criterion(3, r >= 0.95 and o >= 0.95 and dt < 10.0,
                     f"20 seeds, mean recall {r:.4f}, mean outlier rejection {o:.4f} "
                     f"(both >= 0.95), {dt:.2f} s (< 10 s)")


def test_4_multi_plane(criterion):
    two = 0
    agree = total = 0
    for seed in SEEDS:
        lab = generate(corner_scene(noise_sigma=0.0, seed=seed))
        r = run(lab.match_set, Config(seed=seed, grid_n=4))
        two += len(r.groups) == 2
        for g in r.groups:
            labels = lab.labels[list(g.member_matches)]
            values, counts = np.unique(labels[labels != OUTLIER], return_counts=True)
            agree += int(counts.max()) if len(counts) else 0
            total += len(labels)
    purity = agree / total
    assert criterion(4, two >= 18 and purity >= 0.95,
                     f"two-plane corner, 2 groups in {two}/20 runs (>= 18), "
                     f"membership purity {purity:.4f} (>= 0.95)")


def test_5_grid_robustness(criterion):
    lab = generate(single_plane_scene(seed=0))
    r3 = run(lab.match_set, Config(seed=0, grid_n=3))
    r5 = run(lab.match_set, Config(seed=0, grid_n=5))
    c3 = (r3.correct_count, r3.incorrect_count)
    c5 = (r5.correct_count, r5.incorrect_count)
    assert criterion(5, c3 == c5, f"correct/incorrect grid 3 {c3} vs grid 5 {c5}")


def test_6_parameter_stability(criterion):
    lab = generate(single_plane_scene(seed=0))
    ms = lab.match_set
    by_tau = [run(ms, Config(seed=0, cr_tau=t)).correct_count for t in (0.03, 0.05, 0.07)]
    spread = (max(by_tau) - min(by_tau)) / by_tau[1]
    by_px = [run(ms, Config(seed=0, pixel_threshold=p)).correct_count for p in (8, 10, 12)]
    monotone = by_px == sorted(by_px)
    assert criterion(6, spread < 0.02 and monotone,
                     f"correct counts for tau 3/5/7% {by_tau} (change {spread:.2%} < 2%), "
                     f"for 8/10/12 px {by_px} (non-decreasing)")


def test_7_homography_recovery(criterion):
    rng = np.random.default_rng(7)
    e = ImageExtent(900, 900)
    worst = worst_px = 0.0
    for _ in range(1000):
        x0, y0 = rng.uniform(0, 400, 2)
        region = (x0, y0, x0 + rng.uniform(200, 500), y0 + rng.uniform(200, 500))
        h = random_homography(rng, region, e)
        p1 = rng.uniform(region[:2], region[2:], (5, 2))
        p2 = apply_homography(h, p1)
        est = estimate_homography(p1, p2)
        truth = Homography(h).m
        worst = max(worst, float(np.max(np.abs(est.m - truth) / np.abs(truth))))
        worst_px = max(worst_px, float(reprojection_errors(est, p1, p2).max()))
    assert criterion(7, worst < 1e-8 and worst_px < 1e-6,
                     f"1,000 instances, worst entrywise relative error {worst:.2e} (< 1e-8), "
                     f"worst reprojection {worst_px:.2e} px (< 1e-6)")


def test_8_cost_claim(criterion):
    t = benchmark_costs(10_000, seed=0)
    assert criterion(8, t["ratio"] > 10,
                     f"4-point homography {t['homography_4pt_seconds'] * 1e6:.1f} us vs "
                     f"cross-ratio {t['cross_ratio_seconds'] * 1e6:.2f} us, "
                     f"ratio {t['ratio']:.1f} (> 10)")


def test_9_cli_determinism(criterion, tmp_path):
    matches = tmp_path / "m.txt"
    matches.write_text(io.serialize_matches(generate(single_plane_scene(seed=9)).match_set))
    outs = []
    for k in range(2):
        r, s = tmp_path / f"r{k}.json", tmp_path / f"s{k}.svg"
        code = main(["verify", str(matches), "--seed", "9", "--out", str(r), "--svg", str(s)])
        outs.append((code, r.read_bytes(), s.read_bytes()))
    same = outs[0] == outs[1] and outs[0][0] == 0
    assert criterion(9, same, f"two verify runs with --seed 9: report and SVG "
                              f"{'byte-identical' if same else 'differ'}")


def test_10_runtime(criterion):
    ms = generate(single_plane_scene(seed=0)).match_set
    r = run(ms, Config(seed=0, trial_count=1000))
    assert criterion(10, r.wall_time < 2.0,
                     f"single run, 400 matches, 1000 trials: {r.wall_time:.3f} s (< 2 s)")
