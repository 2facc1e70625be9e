"""Static SVG line charts and polygon plots; no plotting library needed."""
from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")
W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 150, 40, 55


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if not math.isfinite(lo) or not math.isfinite(hi):
        return []
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    first = math.ceil(lo / step) * step
    return [first + i * step for i in range(int((hi - first) / step + 1e-9) + 1)]


def _label(v: float) -> str:
    return f"{v:.4g}"


class _Frame:
    def __init__(self, xs, ys, equal=False):
        xs = np.asarray([v for v in xs if math.isfinite(v)], dtype=float)
        ys = np.asarray([v for v in ys if math.isfinite(v)], dtype=float)
        self.x0, self.x1 = (float(xs.min()), float(xs.max())) if xs.size else (0.0, 1.0)
        self.y0, self.y1 = (float(ys.min()), float(ys.max())) if ys.size else (0.0, 1.0)
        if self.x1 == self.x0:
            self.x0, self.x1 = self.x0 - 0.5, self.x1 + 0.5
        if self.y1 == self.y0:
            self.y0, self.y1 = self.y0 - 0.5, self.y1 + 0.5
        self.pw = W - LEFT - RIGHT
        self.ph = H - TOP - BOTTOM
        if equal:
            sx = self.pw / (self.x1 - self.x0)
            sy = self.ph / (self.y1 - self.y0)
            s = min(sx, sy)
            cx, cy = (self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2
            self.x0, self.x1 = cx - self.pw / s / 2, cx + self.pw / s / 2
            self.y0, self.y1 = cy - self.ph / s / 2, cy + self.ph / s / 2

    def px(self, x):
        return LEFT + (x - self.x0) / (self.x1 - self.x0) * self.pw

    def py(self, y):
        return TOP + self.ph - (y - self.y0) / (self.y1 - self.y0) * self.ph

    def axes(self, title, xlabel, ylabel) -> list[str]:
        out = [
            f'<rect x="{LEFT}" y="{TOP}" width="{self.pw}" height="{self.ph}" fill="none" stroke="#333"/>',
            f'<text x="{LEFT + self.pw / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
            f'<text x="{LEFT + self.pw / 2:.1f}" y="{H - 12}" text-anchor="middle" font-size="13">{escape(xlabel)}</text>',
            f'<text x="18" y="{TOP + self.ph / 2:.1f}" text-anchor="middle" font-size="13" '
            f'transform="rotate(-90 18 {TOP + self.ph / 2:.1f})">{escape(ylabel)}</text>',
        ]
        for t in _ticks(self.x0, self.x1):
            x = self.px(t)
            out.append(f'<line x1="{x:.1f}" y1="{TOP + self.ph}" x2="{x:.1f}" y2="{TOP + self.ph + 5}" stroke="#333"/>')
            out.append(f'<text x="{x:.1f}" y="{TOP + self.ph + 18}" text-anchor="middle" font-size="11">{_label(t)}</text>')
        for t in _ticks(self.y0, self.y1):
            y = self.py(t)
            out.append(f'<line x1="{LEFT - 5}" y1="{y:.1f}" x2="{LEFT}" y2="{y:.1f}" stroke="#333"/>')
            out.append(f'<text x="{LEFT - 8}" y="{y + 4:.1f}" text-anchor="end" font-size="11">{_label(t)}</text>')
        return out


def _legend(labels) -> list[str]:
    out = []
    for i, lab in enumerate(labels):
        y = TOP + 12 + 18 * i
        c = PALETTE[i % len(PALETTE)]
        out.append(f'<line x1="{W - RIGHT + 12}" y1="{y}" x2="{W - RIGHT + 32}" y2="{y}" stroke="{c}" stroke-width="2"/>')
        out.append(f'<text x="{W - RIGHT + 38}" y="{y + 4}" font-size="12">{escape(str(lab))}</text>')
    return out


def _doc(body: list[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
            f'viewBox="0 0 {W} {H}" font-family="sans-serif">')
    return "\n".join([head, f'<rect width="{W}" height="{H}" fill="white"/>', *body, "</svg>", ""])


def line_chart(series, title="", xlabel="", ylabel="", markers=False) -> str:
    """``series`` is a list of ``(label, xs, ys)``; non-finite points break the line."""
    allx = [float(v) for _, xs, _ in series for v in xs]
    ally = [float(v) for _, _, ys in series for v in ys]
    fr = _Frame(allx, ally)
    body = fr.axes(title, xlabel, ylabel)
    for i, (_, xs, ys) in enumerate(series):
        c = PALETTE[i % len(PALETTE)]
        seg: list[str] = []
        segs = []
        for x, y in zip(xs, ys):
            if math.isfinite(x) and math.isfinite(y):
                seg.append(f"{fr.px(x):.2f},{fr.py(y):.2f}")
            elif seg:
                segs.append(seg)
                seg = []
        if seg:
            segs.append(seg)
        for s in segs:
            body.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.6" points="{" ".join(s)}"/>')
            if markers:
                body.extend(
                    f'<circle cx="{p.split(",")[0]}" cy="{p.split(",")[1]}" r="2" fill="{c}"/>' for p in s
                )
    body.extend(_legend([lab for lab, _, _ in series]))
    return _doc(body)


def polygon_plot(polygons, points=None, title="", labels=None) -> str:
    """Closed polygons (list of ``(m, 2)`` arrays) over an optional scatter."""
    xs, ys = [], []
    for p in polygons:
        if len(p):
            xs.extend(p[:, 0])
            ys.extend(p[:, 1])
    if points is not None:
        xs.extend(points[:, 0])
        ys.extend(points[:, 1])
    fr = _Frame(xs, ys, equal=True)
    body = fr.axes(title, "x1", "x2")
    if points is not None:
        body.extend(f'<circle cx="{fr.px(x):.1f}" cy="{fr.py(y):.1f}" r="1.2" fill="#999"/>' for x, y in points)
    for i, p in enumerate(polygons):
        if not len(p):
            continue
        c = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{fr.px(x):.2f},{fr.py(y):.2f}" for x, y in p)
        body.append(f'<polygon fill="none" stroke="{c}" stroke-width="1.6" points="{pts}"/>')
    if labels:
        body.extend(_legend(labels))
    return _doc(body)


def write_svg(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path
