"""Micro-benchmark: one cross-ratio evaluation vs. one 4-point homography estimate."""

from __future__ import annotations

import time

import numpy as np

from .errors import DegenerateConfiguration
from .geometry import apply_homography, cross_ratio
from .homography import estimate_homography
from .synth import random_homography
from .matching import ImageExtent

# Operation counts quoted for the two approaches (per evaluation).
STATED_COSTS = {
    "cross_ratio": {"multiplications": 10, "divisions": 1},
    "homography_4pt": {"multiplications": 9 * 9 * 2 * 4, "additions": 72},
}


def _median_call_time(fn, inputs, iterations: int, batch: int) -> list[float]:
    times = []
    n = len(inputs)
    k = 0
    for _ in range(max(1, iterations // batch)):
        t0 = time.perf_counter()
        for _ in range(batch):
            fn(*inputs[k % n])
            k += 1
        times.append((time.perf_counter() - t0) / batch)
    return times


def compare_kernels(fa, inputs_a, fb, inputs_b, iterations: int = 10_000,
                    batch: int = 50) -> dict:
    """Median per-call wall time of two kernels, timed in interleaved batches."""
    ta, tb = [], []
    rounds = 10
    per_round = max(batch, iterations // rounds)
    for _ in range(rounds):
        ta += _median_call_time(fa, inputs_a, per_round, batch)
        tb += _median_call_time(fb, inputs_b, per_round, batch)
    a, b = float(np.median(ta)), float(np.median(tb))
    return {"a_seconds": a, "b_seconds": b, "ratio": b / a}


def cost_workloads(seed: int = 0, pool: int = 256):
    """Random valid cross-ratio inputs and exact 4-point homography problems."""
    rng = np.random.default_rng(seed)
    ext = ImageExtent(1000, 1000)
    cr_inputs, h_inputs = [], []
    while len(cr_inputs) < pool:
        pts = [tuple(p) for p in rng.uniform(0, 1000, size=(5, 2)).tolist()]
        try:
            cross_ratio(*pts)
        except DegenerateConfiguration:
            continue
        cr_inputs.append(pts)
    while len(h_inputs) < pool:
        src = rng.uniform(100, 900, size=(4, 2))
        hm = random_homography(rng, (100, 100, 900, 900), ext, scale_range=(0.5, 1.0))
        try:
            estimate_homography(src, apply_homography(hm, src))
        except DegenerateConfiguration:
            continue
        h_inputs.append((src, apply_homography(hm, src)))
    return cr_inputs, h_inputs


def benchmark_costs(iterations: int = 10_000, seed: int = 0) -> dict:
    """Measured per-evaluation cost of cross_ratio vs. estimate_homography.

    Returns a flat, JSON-ready table including the measured ratio and the
    stated operation counts for comparison.
    """
    if iterations < 1:
        raise ValueError("iterations must be positive")
    cr_inputs, h_inputs = cost_workloads(seed)
    res = compare_kernels(cross_ratio, cr_inputs, estimate_homography, h_inputs, iterations)
    return {
        "iterations": iterations,
        "cross_ratio_seconds": res["a_seconds"],
        "homography_4pt_seconds": res["b_seconds"],
        "ratio": res["ratio"],
        "stated_costs": STATED_COSTS,
    }


def format_cost_table(table: dict) -> str:
    """Tab-separated rendering of a ``benchmark_costs`` result."""
    rows = [
        ("kernel", "median_seconds", "stated_ops"),
        ("cross_ratio", f"{table['cross_ratio_seconds']:.3e}", "10 mul + 1 div"),
        ("homography_4pt", f"{table['homography_4pt_seconds']:.3e}", "648 mul + 72 add + eig"),
        ("ratio", f"{table['ratio']:.2f}", ""),
    ]
    return "\n".join("\t".join(r) for r in rows) + "\n"
