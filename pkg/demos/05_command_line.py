"""The command-line workflow: synthesize, verify, score.

Runs the same steps as

    pentaverify synth scene.json --out matches.txt --labels labels.txt
    pentaverify verify matches.txt --seed 3 --out report.json --svg report.svg
    pentaverify score --report report.json --labels labels.txt

in a temporary directory.
"""

import tempfile
from pathlib import Path

from pentaverify import io, single_plane_scene
from pentaverify.cli import main

with tempfile.TemporaryDirectory() as tmp:
    d = Path(tmp)
    (d / "scene.json").write_text(io.serialize_scene(single_plane_scene(seed=3)))
    main(["synth", str(d / "scene.json"), "--out", str(d / "matches.txt"),
          "--labels", str(d / "labels.txt")])
    print("first lines of the match file:")
    print("".join((d / "matches.txt").read_text().splitlines(keepends=True)[:3]), end="")
    code = main(["verify", str(d / "matches.txt"), "--seed", "3",
                 "--out", str(d / "report.json"), "--svg", str(d / "report.svg")])
    print(f"verify exit code {code}")
    main(["score", "--report", str(d / "report.json"), "--labels", str(d / "labels.txt")])
