"""CSV, JSON and SVG renderings of sampled curves.

Floats are written with ``repr``, the shortest string that parses back to the
same double, so every output format round-trips bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Sequence

import numpy as np

from .sample import CurveSample, Summary

SUMMARY_KEYS = ("lambda", "gamma", "x_min", "y_min", "s_min", "t_min", "t_max", "sag",
                "stretched_length")


def fmt(value: float) -> str:
    return repr(float(value))


def csv_text(curves: Sequence[CurveSample], with_gamma: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["s", "x", "y", "tension"]
    writer.writerow(["gamma", *header] if with_gamma else header)
    for curve in curves:
        lead = [fmt(curve.meta["gamma"])] if with_gamma else []
        for row in zip(curve.s, curve.x, curve.y, curve.tension):
            writer.writerow(lead + [fmt(v) for v in row])
    return buf.getvalue()


def summary_dict(summary: Summary) -> dict:
    values = (summary.lam, summary.gamma, summary.x_min, summary.y_min, summary.s_min,
              summary.t_min, summary.t_max, summary.sag, summary.stretched_length)
    return {key: float(v) for key, v in zip(SUMMARY_KEYS, values)}


def points_list(curve: CurveSample) -> list[dict]:
    return [{"s": s, "x": x, "y": y, "tension": t} for s, x, y, t in curve.points]


def curve_dict(summary: Summary, curve: CurveSample, **extra) -> dict:
    doc = summary_dict(summary)
    doc.update(extra)
    doc["points"] = points_list(curve)
    return doc


def json_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def svg_text(curves: Sequence[CurveSample], margin: float = 0.05) -> str:
    """One polyline per curve, y flipped so higher points render higher.

    The viewBox is the data bounding box padded by ``margin`` of its extent on
    each side. An inelastic curve is drawn red, elastic ones black.
    """
    xs = np.concatenate([c.x for c in curves])
    ys = np.concatenate([c.y for c in curves])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    w = (x1 - x0) or 1.0
    h = (y1 - y0) or 1.0
    left, top = x0 - margin * w, -y1 - margin * h
    width, height = w * (1 + 2 * margin), h * (1 + 2 * margin)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{fmt(left)} {fmt(top)} {fmt(width)} {fmt(height)}" '
        'width="800" height="600" preserveAspectRatio="xMidYMid meet">',
    ]
    for curve in curves:
        colour = "red" if curve.meta["gamma"] == 0.0 else "black"
        pts = " ".join(f"{fmt(x)},{fmt(-y)}" for x, y in zip(curve.x, curve.y))
        lines.append(
            f'  <polyline fill="none" stroke="{colour}" stroke-width="1.5" '
            f'vector-effect="non-scaling-stroke" data-gamma="{fmt(curve.meta["gamma"])}" '
            f'points="{pts}"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
