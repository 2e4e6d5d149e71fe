"""Verify a synthetic single-plane scene: half the matches are garbage.

The scene has 200 matches on one plane (with 0.5 px noise) and 200 matches
drawn uniformly at random. The verifier never sees the labels; we only use
them afterwards to score it. An SVG of the result is written next to this
script.
"""

from pathlib import Path

from pentaverify import Config, generate, render_report_svg, run, single_plane_scene
from pentaverify.cli import score

lab = generate(single_plane_scene(inliers=200, outliers=200, noise_sigma=0.5, seed=1))
report = run(lab.match_set, Config(seed=1))

print(f"status: {report.status}")
print(f"pentagons kept {len(report.kept)}, rejected {len(report.rejected)}, "
      f"planar groups {len(report.groups)}")
print(f"{report.correct_count} correct / {report.incorrect_count} incorrect "
      f"after {report.gate_evaluations} gate evaluations in {report.wall_time:.3f} s")

s = score(report, lab.labels)
print(f"precision {s['precision']:.3f}, recall {s['recall']:.3f}, "
      f"outliers rejected {s['outlier_rejection']:.3f}")

out = Path(__file__).with_name("single_plane.svg")
out.write_text(render_report_svg(lab.match_set, report))
print(f"wrote {out}")
