"""Command-line front end: ``verify``, ``synth``, ``bench`` and ``score``."""

from __future__ import annotations

import argparse
import json
import logging
import secrets
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io
from .bench import benchmark_costs, format_cost_table
from .errors import InvalidInput, PentaverifyError
from .pipeline import STATUS_NO_PLANE, Config, run
from .render import render_report_svg
from .synth import OUTLIER, generate

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NO_PLANE = 2


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(63)
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def cmd_verify(args) -> int:
    ms = io.parse_matches(_read(args.matches))
    cfg = Config(grid_n=args.grid, cr_tau=args.tau, trial_count=args.trials,
                 per_block_pentagons=args.per_block, pixel_threshold=args.pixel_thresh,
                 orientation_check=not args.no_orientation_check, seed=_seed(args))
    report = run(ms, cfg, workers=args.workers)
    if args.out:
        _write(args.out, io.serialize_report(report))
    if args.svg:
        _write(args.svg, render_report_svg(ms, report))
    print(f"{report.correct_count} correct / {report.incorrect_count} incorrect, "
          f"{len(report.groups)} planar group(s), {len(report.kept)} kept / "
          f"{len(report.rejected)} rejected pentagon(s), "
          f"{report.gate_evaluations} gate evaluations, {report.wall_time:.3f} s",
          file=sys.stderr if args.out == "-" else sys.stdout)
    return EXIT_NO_PLANE if report.status == STATUS_NO_PLANE else EXIT_OK


def cmd_synth(args) -> int:
    spec = io.parse_scene(_read(args.spec))
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    lab = generate(spec)
    _write(args.out, io.serialize_matches(lab.match_set))
    if args.labels:
        _write(args.labels, io.serialize_labels(lab.labels))
    return EXIT_OK


def cmd_bench(args) -> int:
    table = benchmark_costs(args.iters, seed=_seed(args))
    if args.json:
        print(json.dumps(table, indent=2))
    else:
        sys.stdout.write(format_cost_table(table))
    return EXIT_OK


def score(report, labels) -> dict:
    """Precision/recall of the Correct verdicts against oracle labels."""
    labels = np.asarray(labels)
    if len(labels) != report.n_matches:
        raise InvalidInput(f"{len(labels)} labels for {report.n_matches} matches")
    correct = report.correct_mask()
    inlier = labels != OUTLIER
    tp = int(np.sum(correct & inlier))
    return {
        "precision": tp / correct.sum() if correct.any() else 1.0,
        "recall": tp / inlier.sum() if inlier.any() else 1.0,
        "outlier_rejection": float(np.mean(~correct[~inlier])) if (~inlier).any() else 1.0,
        "correct": int(correct.sum()),
        "incorrect": int((~correct).sum()),
    }


def cmd_score(args) -> int:
    report = io.parse_report(_read(args.report))
    labels = io.parse_labels(_read(args.labels))
    s = score(report, labels)
    for k, v in s.items():
        print(f"{k}\t{v:.4f}" if isinstance(v, float) else f"{k}\t{v}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pentaverify",
                                description="Verify two-view point matches with pentagon cross-ratios.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="classify the matches in a match file")
    v.add_argument("matches")
    v.add_argument("--grid", type=int, default=3)
    v.add_argument("--tau", type=float, default=0.05)
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--per-block", type=int, default=1)
    v.add_argument("--pixel-thresh", type=float, default=10.0)
    v.add_argument("--no-orientation-check", action="store_true")
    v.add_argument("--seed", type=int)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out", help="write the report here")
    v.add_argument("--svg", help="write an SVG visualization here")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("synth", help="generate a labelled match file from a scene spec")
    s.add_argument("spec")
    s.add_argument("--out", required=True)
    s.add_argument("--labels")
    s.add_argument("--seed", type=int, help="override the spec's seed")
    s.set_defaults(func=cmd_synth)

    b = sub.add_parser("bench", help="time cross-ratio vs homography estimation")
    b.add_argument("--iters", type=int, default=10_000)
    b.add_argument("--seed", type=int)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("score", help="precision/recall of a report against oracle labels")
    c.add_argument("--report", required=True)
    c.add_argument("--labels", required=True)
    c.set_defaults(func=cmd_score)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (PentaverifyError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
