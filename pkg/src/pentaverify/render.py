"""Side-by-side SVG rendering of pentagons and per-match verdicts."""

from __future__ import annotations

from xml.sax.saxutils import escape

# Rejected pentagons are always drawn in blue; groups never use it.
REJECTED_COLOR = "#1f4fff"
INCORRECT_COLOR = "#7f7f7f"
PANEL_COLOR = "#000000"
GROUP_COLORS = ("#e6194b", "#f58231", "#3cb44b", "#911eb4", "#f032e6",
                "#808000", "#9a6324", "#469990", "#800000", "#000075")
GAP = 20


def group_color(gid: int) -> str:
    return GROUP_COLORS[gid % len(GROUP_COLORS)]


def _f(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


def _polygon(pts, dx, color, width=2.0):
    coords = " ".join(f"{_f(x + dx)},{_f(y)}" for x, y in pts)
    return (f'<polygon points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{_f(width)}"/>')


def render_report_svg(ms, report, radius: float = 3.0) -> str:
    """Two panels (image 1 left, image 2 right) with pentagons and match markers.

    Kept pentagons take their group's colour, rejected ones blue; correct
    matches are circles in the group colour and incorrect ones grey crosses.
    """
    w1, h1 = ms.extent1.width, ms.extent1.height
    w2, h2 = ms.extent2.width, ms.extent2.height
    width, height = w1 + GAP + w2, max(h1, h2)
    off2 = w1 + GAP

    group_of_pentagon = {}
    for g in report.groups:
        for pid in g.pentagon_ids:
            group_of_pentagon[pid] = g.id

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f"<title>{escape(f'{report.correct_count} correct / {report.incorrect_count} incorrect')}</title>",
        f'<rect id="panel1" x="0" y="0" width="{w1}" height="{h1}" fill="#ffffff" '
        f'stroke="{PANEL_COLOR}" stroke-width="1"/>',
        f'<rect id="panel2" x="{off2}" y="0" width="{w2}" height="{h2}" fill="#ffffff" '
        f'stroke="{PANEL_COLOR}" stroke-width="1"/>',
        '<g id="matches">',
    ]
    r = _f(radius)
    for v in report.verdicts:
        (x1, y1), (x2, y2) = ms.p1[v.match_index], ms.p2[v.match_index]
        if v.correct:
            c = group_color(v.group_id)
            for x, y in ((x1, y1), (x2 + off2, y2)):
                out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{r}" fill="none" '
                           f'stroke="{c}" stroke-width="1"/>')
        else:
            for x, y in ((x1, y1), (x2 + off2, y2)):
                out.append(f'<path d="M{_f(x - radius)},{_f(y - radius)}L{_f(x + radius)},'
                           f'{_f(y + radius)}M{_f(x - radius)},{_f(y + radius)}L'
                           f'{_f(x + radius)},{_f(y - radius)}" stroke="{INCORRECT_COLOR}" '
                           f'stroke-width="1"/>')
    out.append("</g>")

    out.append('<g id="pentagons">')
    for pid, pair in enumerate(report.kept):
        gid = group_of_pentagon.get(pid)
        # Kept pentagons whose group was dropped at fitting time are not drawn.
        if gid is None:
            continue
        c = group_color(gid)
        out.append(_polygon(pair.pent1.vertices, 0, c))
        out.append(_polygon(pair.pent2.vertices, off2, c))
    for pair in report.rejected:
        out.append(_polygon(pair.pent1.vertices, 0, REJECTED_COLOR))
        out.append(_polygon(pair.pent2.vertices, off2, REJECTED_COLOR))
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
