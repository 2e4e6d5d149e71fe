"""Text formats: match files, label files, scene specs and verification reports.

Match file grammar (one record per line, ``#`` starts a comment)::

    pentaverify-matches v1 <w1> <h1> <w2> <h2>
    <x1> <y1> <x2> <y2>
    ...

Coordinates are non-negative decimals with at most six fractional digits.
"""

from __future__ import annotations

import json
import re

import numpy as np

from .errors import BoundsError, ParseError
from .geometry import Pentagon
from .homography import Homography, MatchVerdict
from .matching import ImageExtent, MatchSet, PentagonPair
from .pipeline import Config, VerificationReport
from .planar import PlanarGroup
from .synth import OUTLIER, PlaneSpec, SceneSpec

MATCH_MAGIC = "pentaverify-matches"
LABEL_MAGIC = "pentaverify-labels"
REPORT_FORMAT = "pentaverify-report"
SCENE_FORMAT = "pentaverify-scene"
VERSION = 1

_NUMBER = re.compile(r"\d+(?:\.\d{1,6})?")
_INT = re.compile(r"[1-9]\d*")


def format_coord(v: float) -> str:
    """Shortest decimal with at most six fractional digits."""
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


def _records(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_matches(text: str) -> MatchSet:
    records = _records(text)
    try:
        lineno, head = next(records)
    except StopIteration:
        raise ParseError("empty document, expected a header line") from None
    if len(head) != 6 or head[0] != MATCH_MAGIC:
        raise ParseError(f"expected '{MATCH_MAGIC} v1 <w1> <h1> <w2> <h2>'", line=lineno)
    if head[1] != f"v{VERSION}":
        raise ParseError(f"unsupported version {head[1]!r}", line=lineno, field="version")
    dims = []
    for name, tok in zip(("w1", "h1", "w2", "h2"), head[2:]):
        if not _INT.fullmatch(tok):
            raise ParseError(f"extent must be a positive integer, got {tok!r}",
                             line=lineno, field=name)
        dims.append(int(tok))
    e1, e2 = ImageExtent(dims[0], dims[1]), ImageExtent(dims[2], dims[3])

    rows = []
    for lineno, toks in records:
        if len(toks) != 4:
            raise ParseError(f"expected 4 coordinates, got {len(toks)}", line=lineno)
        row = []
        for name, tok in zip(("x1", "y1", "x2", "y2"), toks):
            if not _NUMBER.fullmatch(tok):
                raise ParseError(f"bad coordinate {tok!r}", line=lineno, field=name)
            row.append(float(tok))
        x1, y1, x2, y2 = row
        if not (x1 < e1.width and y1 < e1.height):
            raise BoundsError(f"line {lineno}: ({_fmt_point(x1, y1)}) outside image 1 "
                              f"{e1.width}x{e1.height}")
        if not (x2 < e2.width and y2 < e2.height):
            raise BoundsError(f"line {lineno}: ({_fmt_point(x2, y2)}) outside image 2 "
                              f"{e2.width}x{e2.height}")
        rows.append(row)
    arr = np.array(rows, dtype=float).reshape(-1, 4)
    return MatchSet(e1, e2, arr[:, :2], arr[:, 2:])


def _fmt_point(x, y):
    return f"{format_coord(x)}, {format_coord(y)}"


def serialize_matches(ms: MatchSet) -> str:
    e1, e2 = ms.extent1, ms.extent2
    lines = [f"{MATCH_MAGIC} v{VERSION} {e1.width} {e1.height} {e2.width} {e2.height}"]
    for (x1, y1), (x2, y2) in zip(ms.p1.tolist(), ms.p2.tolist()):
        lines.append(" ".join(format_coord(v) for v in (x1, y1, x2, y2)))
    return "\n".join(lines) + "\n"


def canonical_matches(text: str) -> str:
    """Canonical form of a match document: comments dropped, numbers normalized."""
    return serialize_matches(parse_matches(text))


def serialize_labels(labels) -> str:
    labels = np.asarray(labels, dtype=int)
    lines = [f"{LABEL_MAGIC} v{VERSION} {len(labels)}"]
    lines += ["outlier" if k == OUTLIER else f"inlier {k}" for k in labels.tolist()]
    return "\n".join(lines) + "\n"


def parse_labels(text: str) -> np.ndarray:
    records = list(_records(text))
    if not records or records[0][1][:2] != [LABEL_MAGIC, f"v{VERSION}"] or len(records[0][1]) != 3:
        raise ParseError(f"expected '{LABEL_MAGIC} v1 <count>' header", line=1)
    n = int(records[0][1][2])
    out = []
    for lineno, toks in records[1:]:
        if toks == ["outlier"]:
            out.append(OUTLIER)
        elif len(toks) == 2 and toks[0] == "inlier" and toks[1].isdigit():
            out.append(int(toks[1]))
        else:
            raise ParseError(f"bad label {' '.join(toks)!r}", line=lineno)
    if len(out) != n:
        raise ParseError(f"header declares {n} labels, found {len(out)}")
    return np.array(out, dtype=int)


# Scene specs (JSON)

def scene_to_dict(spec: SceneSpec) -> dict:
    return {
        "format": SCENE_FORMAT,
        "version": VERSION,
        "extent1": [spec.extent1.width, spec.extent1.height],
        "extent2": [spec.extent2.width, spec.extent2.height],
        "planes": [
            {
                "region": [float(v) for v in p.region],
                "inlier_count": p.inlier_count,
                "homography": None if p.homography is None
                else np.asarray(p.homography, dtype=float).tolist(),
            }
            for p in spec.planes
        ],
        "outlier_count": spec.outlier_count,
        "near_miss_count": spec.near_miss_count,
        "noise_sigma": spec.noise_sigma,
        "seed": spec.seed,
    }


def scene_from_dict(d: dict) -> SceneSpec:
    if d.get("format") != SCENE_FORMAT or d.get("version") != VERSION:
        raise ParseError(f"not a {SCENE_FORMAT} v{VERSION} document")
    try:
        planes = tuple(
            PlaneSpec(tuple(p["region"]), int(p["inlier_count"]),
                      None if p.get("homography") is None else np.array(p["homography"]))
            for p in d["planes"]
        )
        return SceneSpec(ImageExtent(*d["extent1"]), ImageExtent(*d["extent2"]), planes,
                         int(d.get("outlier_count", 0)), float(d.get("noise_sigma", 0.0)),
                         int(d.get("seed", 0)), int(d.get("near_miss_count", 0)))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed scene spec: {exc}") from exc


def serialize_scene(spec: SceneSpec) -> str:
    return json.dumps(scene_to_dict(spec), indent=2) + "\n"


def parse_scene(text: str) -> SceneSpec:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), line=exc.lineno) from exc
    return scene_from_dict(d)


# Reports (JSON tree)

def _pair_to_dict(p: PentagonPair) -> dict:
    return {
        "indices": list(p.indices),
        "block": None if p.source_block is None else list(p.source_block),
        "image1": [list(v) for v in p.pent1.vertices],
        "image2": [list(v) for v in p.pent2.vertices],
        "min_sep": [p.pent1.min_sep, p.pent2.min_sep],
    }


def _pair_from_dict(d: dict) -> PentagonPair:
    sep1, sep2 = d["min_sep"]
    return PentagonPair(
        tuple(d["indices"]),
        Pentagon(tuple(tuple(v) for v in d["image1"]), sep1),
        Pentagon(tuple(tuple(v) for v in d["image2"]), sep2),
        None if d["block"] is None else tuple(d["block"]),
    )


def report_to_dict(report: VerificationReport) -> dict:
    return {
        "format": REPORT_FORMAT,
        "version": VERSION,
        "status": report.status,
        "config": report.config.to_dict(),
        "n_matches": report.n_matches,
        "counters": {
            "correct": report.correct_count,
            "incorrect": report.incorrect_count,
            "per_group": {str(k): v for k, v in report.group_counts.items()},
            "gate_evaluations": report.gate_evaluations,
        },
        "pentagons": {
            "kept": [_pair_to_dict(p) for p in report.kept],
            "rejected": [_pair_to_dict(p) for p in report.rejected],
        },
        "groups": [
            {
                "id": g.id,
                "pentagon_ids": list(g.pentagon_ids),
                "member_matches": list(g.member_matches),
                "homography": None if g.homography is None else g.homography.m.tolist(),
            }
            for g in report.groups
        ],
        "verdicts": [[v.match_index, v.group_id, v.error] for v in report.verdicts],
    }


def report_from_dict(d: dict) -> VerificationReport:
    if d.get("format") != REPORT_FORMAT or d.get("version") != VERSION:
        raise ParseError(f"not a {REPORT_FORMAT} v{VERSION} document")
    try:
        groups = tuple(
            PlanarGroup(g["id"], tuple(g["pentagon_ids"]), tuple(g["member_matches"]),
                        None if g["homography"] is None else Homography(np.array(g["homography"])))
            for g in d["groups"]
        )
        report = VerificationReport(
            config=Config(**d["config"]),
            status=d["status"],
            n_matches=d["n_matches"],
            kept=tuple(_pair_from_dict(p) for p in d["pentagons"]["kept"]),
            rejected=tuple(_pair_from_dict(p) for p in d["pentagons"]["rejected"]),
            groups=groups,
            verdicts=tuple(MatchVerdict(i, g, e) for i, g, e in d["verdicts"]),
            gate_evaluations=d["counters"]["gate_evaluations"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed report: {exc}") from exc
    counters = d["counters"]
    if (counters["correct"] != report.correct_count
            or counters["incorrect"] != report.incorrect_count):
        raise ParseError("report counters disagree with its verdicts", field="counters")
    return report


def serialize_report(report: VerificationReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def parse_report(text: str) -> VerificationReport:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), line=exc.lineno) from exc
    return report_from_dict(d)
