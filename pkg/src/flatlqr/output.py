"""CSV tables and minimal SVG line plots."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Optional, Sequence

import numpy as np


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return repr(float(v))  # shortest round-trip representation


def csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.write_text(csv_text(header, rows))
    return path


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def line_plot_svg(series, title: str = "", xlabel: str = "", ylabel: str = "",
                  marker: Optional[tuple] = None, width: int = 640,
                  height: int = 400) -> str:
    """Polylines on shared axes. ``series`` is a list of ``(x, y, label)``."""
    pad_l, pad_r, pad_t, pad_b = 70, 20, 30, 50
    xs = np.concatenate([np.asarray(s[0], float) for s in series])
    ys = np.concatenate([np.asarray(s[1], float) for s in series])
    finite = np.isfinite(xs) & np.isfinite(ys)
    x0, x1 = float(np.min(xs[finite])), float(np.max(xs[finite]))
    y0, y1 = float(np.min(ys[finite])), float(np.max(ys[finite]))
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw, ph = width - pad_l - pad_r, height - pad_t - pad_b

    def px(x):
        return pad_l + (x - x0) / (x1 - x0) * pw

    def py(y):
        return pad_t + (1 - (y - y0) / (y1 - y0)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<line x1="{pad_l}" y1="{pad_t + ph}" x2="{pad_l + pw}" y2="{pad_t + ph}" stroke="black"/>',
           f'<line x1="{pad_l}" y1="{pad_t}" x2="{pad_l}" y2="{pad_t + ph}" stroke="black"/>']
    for frac in (0.0, 0.5, 1.0):
        xv, yv = x0 + frac * (x1 - x0), y0 + frac * (y1 - y0)
        out.append(f'<text x="{px(xv):.2f}" y="{pad_t + ph + 16}" font-size="11" '
                   f'text-anchor="middle">{xv:.4g}</text>')
        out.append(f'<text x="{pad_l - 6}" y="{py(yv):.2f}" font-size="11" '
                   f'text-anchor="end">{yv:.4g}</text>')
    out.append(f'<text x="{pad_l + pw / 2:.2f}" y="{height - 10}" font-size="13" '
               f'text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="14" y="{pad_t + ph / 2:.2f}" font-size="13" text-anchor="middle" '
               f'transform="rotate(-90 14 {pad_t + ph / 2:.2f})">{ylabel}</text>')
    out.append(f'<text x="{width / 2:.2f}" y="18" font-size="14" text-anchor="middle">{title}</text>')
    for i, (sx, sy, label) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(sx, sy)
                       if math.isfinite(a) and math.isfinite(b))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{pad_l + pw - 4}" y="{pad_t + 14 + 14 * i}" font-size="11" '
                   f'text-anchor="end" fill="{color}">{label}</text>')
    if marker is not None:
        mx, my = marker
        out.append(f'<circle cx="{px(mx):.2f}" cy="{py(my):.2f}" r="4" fill="none" '
                   f'stroke="black" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, *args, **kwargs) -> Path:
    path = Path(path)
    path.write_text(line_plot_svg(*args, **kwargs))
    return path
