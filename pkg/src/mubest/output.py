"""CSV and SVG emission for experiment curves.

Both writers are byte-deterministic for a given input: no timestamps, no
random ids, fixed number formatting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .errors import InputError

CSV_HEADER = "series,x,mean,stderr"

# colour-blind friendly palette (Okabe-Ito)
_PALETTE = ("#0072B2", "#D55E00", "#009E73", "#CC79A7", "#E69F00", "#56B4E9", "#000000", "#F0E442")

_WIDTH, _HEIGHT = 720, 480
_LEFT, _RIGHT, _TOP, _BOTTOM = 80, 180, 40, 60


def _num(v: float) -> str:
    return format(float(v), ".17g")


def _csv_field(text: str) -> str:
    if any(c in text for c in ',"\n\r'):
        return '"' + text.replace('"', '""') + '"'
    return text


def write_csv(series: Sequence, path) -> Path:
    """Write ``series,x,mean,stderr`` rows sorted by (label, x) with LF endings."""
    rows = []
    for s in series:
        for x, m, e in zip(s.x, s.mean, s.stderr):
            rows.append((s.label, float(x), float(m), float(e)))
    rows.sort(key=lambda r: (r[0], r[1]))
    lines = [CSV_HEADER]
    lines += [f"{_csv_field(lbl)},{_num(x)},{_num(m)},{_num(e)}" for lbl, x, m, e in rows]
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc
    return path


def read_csv(path) -> dict:
    """Parse a file written by :func:`write_csv` into ``{label: (x, mean, stderr)}``."""
    import csv

    out: dict = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            xs, ms, es = out.setdefault(row["series"], ([], [], []))
            xs.append(float(row["x"]))
            ms.append(float(row["mean"]))
            es.append(float(row["stderr"]))
    return {k: tuple(np.array(v) for v in vals) for k, vals in out.items()}


@dataclass(frozen=True)
class AxesSpec:
    xlog: bool = True
    ylog: bool = True
    title: str = ""
    xlabel: str = "x"
    ylabel: str = "mean regret (band: +/- 1 standard error)"


class _Scale:
    def __init__(self, lo, hi, log, px_lo, px_hi):
        self.log = log
        if log:
            lo, hi = math.log10(lo), math.log10(hi)
        if hi == lo:
            lo, hi = lo - 0.5, hi + 0.5
        self.lo, self.hi, self.px_lo, self.px_hi = lo, hi, px_lo, px_hi

    def __call__(self, v):
        t = math.log10(v) if self.log else v
        return self.px_lo + (t - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)

    def ticks(self):
        if self.log:
            return [10.0 ** k for k in range(math.ceil(self.lo - 1e-9), math.floor(self.hi + 1e-9) + 1)]
        step = _nice_step((self.hi - self.lo) / 5)
        start = math.ceil(self.lo / step) * step
        out, v = [], start
        while v <= self.hi + 1e-9 * step:
            out.append(round(v / step) * step)
            v += step
        return out


def _nice_step(raw: float) -> float:
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1, 2, 5, 10):
        if raw <= m * mag:
            return m * mag
    return 10 * mag


def _fmt_tick(v: float, log: bool) -> str:
    if log:
        return f"1e{int(round(math.log10(v)))}"
    return format(v, ".6g")


def _pts(coords) -> str:
    return " ".join(f"{x:.2f},{y:.2f}" for x, y in coords)


def render_svg(series: Sequence, path, axes: AxesSpec = AxesSpec()) -> Path:
    """Standalone SVG: one mean polyline per series over a translucent +/- stderr band."""
    if not series:
        raise InputError("render_svg needs at least one series")
    xs = np.concatenate([np.asarray(s.x, float) for s in series])
    if xs.size == 0 or xs.min() == xs.max():
        raise InputError("degenerate x range: all x values are equal")
    means = np.concatenate([np.asarray(s.mean, float) for s in series])
    lows = np.concatenate([np.asarray(s.mean, float) - np.asarray(s.stderr, float) for s in series])
    highs = np.concatenate([np.asarray(s.mean, float) + np.asarray(s.stderr, float) for s in series])
    if axes.xlog and xs.min() <= 0:
        raise InputError("log x axis needs positive x values")
    if axes.ylog:
        positive = means[means > 0]
        if positive.size == 0:
            raise InputError("log y axis needs positive values")
        floor = positive.min() / 10.0
        ylo, yhi = max(lows.min(), floor), highs.max()
    else:
        ylo, yhi = lows.min(), highs.max()

    sx = _Scale(xs.min(), xs.max(), axes.xlog, _LEFT, _WIDTH - _RIGHT)
    sy = _Scale(ylo, yhi, axes.ylog, _HEIGHT - _BOTTOM, _TOP)
    clampy = (lambda v: max(v, ylo)) if axes.ylog else (lambda v: v)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
    ]
    if axes.title:
        out.append(f'<text x="{_WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">'
                   f'{escape(axes.title)}</text>')

    x0, x1 = _LEFT, _WIDTH - _RIGHT
    y0, y1 = _HEIGHT - _BOTTOM, _TOP
    out.append(f'<g class="axes" stroke="#444" fill="none">'
               f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}"/></g>')
    for t in sx.ticks():
        px = sx(t)
        if x0 - 0.5 <= px <= x1 + 0.5:
            out.append(f'<line class="tick" x1="{px:.2f}" y1="{y0}" x2="{px:.2f}" y2="{y0 + 5}" stroke="#444"/>')
            out.append(f'<text x="{px:.2f}" y="{y0 + 18}" text-anchor="middle">{_fmt_tick(t, axes.xlog)}</text>')
    for t in sy.ticks():
        py = sy(t)
        if y1 - 0.5 <= py <= y0 + 0.5:
            out.append(f'<line class="tick" x1="{x0 - 5}" y1="{py:.2f}" x2="{x0}" y2="{py:.2f}" stroke="#444"/>')
            out.append(f'<text x="{x0 - 8}" y="{py + 4:.2f}" text-anchor="end">{_fmt_tick(t, axes.ylog)}</text>')
    out.append(f'<text x="{(x0 + x1) / 2:.1f}" y="{_HEIGHT - 15}" text-anchor="middle">{escape(axes.xlabel)}</text>')
    out.append(f'<text x="18" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {(y0 + y1) / 2:.1f})">{escape(axes.ylabel)}</text>')

    for i, s in enumerate(series):
        colour = _PALETTE[i % len(_PALETTE)]
        x = np.asarray(s.x, float)
        m = np.asarray(s.mean, float)
        e = np.asarray(s.stderr, float)
        upper = [(sx(a), sy(clampy(b + c))) for a, b, c in zip(x, m, e)]
        lower = [(sx(a), sy(clampy(b - c))) for a, b, c in zip(x, m, e)]
        out.append(f'<polygon class="band" points="{_pts(upper + lower[::-1])}" '
                   f'fill="{colour}" fill-opacity="0.2" stroke="none"/>')
        line = [(sx(a), sy(clampy(b))) for a, b in zip(x, m)]
        out.append(f'<polyline class="mean" points="{_pts(line)}" fill="none" '
                   f'stroke="{colour}" stroke-width="1.5"/>')

    lx, ly = x1 + 15, y1 + 10
    for i, s in enumerate(series):
        colour = _PALETTE[i % len(_PALETTE)]
        yy = ly + 18 * i
        out.append(f'<line x1="{lx}" y1="{yy}" x2="{lx + 20}" y2="{yy}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{yy + 4}">{escape(s.label)}</text>')
    out.append("</svg>")

    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(out) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc
    return path
