"""Self-contained SVG line plots: real part in blue, imaginary part in red."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 1280, 480


@dataclass(frozen=True)
class Panel:
    title: str
    x: np.ndarray
    values: np.ndarray


def _pi_label(k: int) -> str:
    f = Fraction(k, 2)
    if f == 0:
        return "0"
    num = "" if f.numerator == 1 else str(f.numerator)
    return f"{num}π" if f.denominator == 1 else f"{num}π/{f.denominator}"


def _polyline(xs, ys, color: str) -> str:
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    return f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{pts}"/>'


def _panel(p: Panel, ox: float, oy: float, w: float, h: float, ylim) -> list[str]:
    pad_l, pad_r, pad_t, pad_b = 40, 10, 22, 26
    pw, ph = w - pad_l - pad_r, h - pad_t - pad_b
    x0, x1 = 0.0, float(p.x[-1] + (p.x[1] - p.x[0]))
    lo, hi = ylim
    sx = lambda x: ox + pad_l + (x - x0) / (x1 - x0) * pw  # noqa: E731
    sy = lambda y: oy + pad_t + (hi - y) / (hi - lo) * ph  # noqa: E731
    out = [
        f'<text x="{ox + w / 2:.1f}" y="{oy + 15:.1f}" text-anchor="middle" font-size="13">{escape(p.title)}</text>',
        f'<rect x="{ox + pad_l:.1f}" y="{oy + pad_t:.1f}" width="{pw:.1f}" height="{ph:.1f}" '
        'fill="none" stroke="#888" stroke-width="0.5"/>',
    ]
    for k in range(int(math.floor(x1 / (math.pi / 2) + 1e-9)) + 1):
        xv = k * math.pi / 2
        X = sx(xv)
        out.append(f'<line x1="{X:.1f}" y1="{oy + pad_t + ph:.1f}" x2="{X:.1f}" y2="{oy + pad_t + ph + 4:.1f}" stroke="#444"/>')
        out.append(f'<text x="{X:.1f}" y="{oy + pad_t + ph + 16:.1f}" text-anchor="middle" font-size="10">{_pi_label(k)}</text>')
    for yv in (lo, 0.0, hi):
        if lo <= yv <= hi:
            Y = sy(yv)
            out.append(f'<text x="{ox + pad_l - 4:.1f}" y="{Y + 3:.1f}" text-anchor="end" font-size="10">{yv:.2g}</text>')
    if lo < 0 < hi:
        out.append(f'<line x1="{sx(x0):.1f}" y1="{sy(0):.1f}" x2="{sx(x1):.1f}" y2="{sy(0):.1f}" '
                   'stroke="#ccc" stroke-width="0.5"/>')
    xs = [sx(v) for v in p.x]
    out.append(_polyline(xs, [sy(v) for v in np.real(p.values)], "blue"))
    out.append(_polyline(xs, [sy(v) for v in np.imag(p.values)], "red"))
    return out


def render_svg(panels: list[Panel], title: str = "") -> str:
    """Lay panels out on a grid inside a ``1280 x 480`` view box."""
    n = max(1, len(panels))
    cols = min(n, 3)
    rows = math.ceil(n / cols)
    top = 24 if title else 0
    w, h = WIDTH / cols, (HEIGHT - top) / rows
    vals = np.concatenate([np.concatenate([np.real(p.values), np.imag(p.values)]) for p in panels]) if panels else np.zeros(1)
    lo, hi = float(np.min(vals)), float(np.max(vals))
    margin = 0.05 * (hi - lo) if hi > lo else 1.0
    ylim = (lo - margin, hi + margin)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        parts.append(f'<text x="{WIDTH / 2}" y="17" text-anchor="middle" font-size="15">{escape(title)}</text>')
    for i, p in enumerate(panels):
        r, c = divmod(i, cols)
        parts.extend(_panel(p, c * w, top + r * h, w, h, ylim))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(path: str | Path, panels: list[Panel], title: str = "") -> None:
    Path(path).write_text(render_svg(panels, title))
