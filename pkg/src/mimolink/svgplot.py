"""Dependency-free SVG line plots with byte-deterministic output."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ShapeError

_WIDTH, _HEIGHT = 640, 420
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 160, 30, 50
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


@dataclass(frozen=True)
class AxisSpec:
    """Which column carries x values, plus axis labels."""

    x_column: str
    x_label: str = ""
    y_label: str = ""
    title: str = ""


def _fmt(v: float) -> str:
    return format(v, ".6g")


def _scale(v, lo, hi, out_lo, out_hi):
    if hi == lo:
        return (out_lo + out_hi) / 2.0
    return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo)


def render_svg(table: dict[str, list[float]], axis: AxisSpec) -> str:
    """Render one polyline per non-x column of ``table``.

    The table maps column names to equal-length numeric sequences; the
    column named by ``axis.x_column`` supplies x coordinates.  Output is a
    standalone SVG document whose bytes depend only on the input.
    Single-point series are drawn as a marker instead of a line.
    """
    if axis.x_column not in table:
        raise ShapeError(f"table has no x column {axis.x_column!r}")
    x = [float(v) for v in table[axis.x_column]]
    series = {k: [float(v) for v in vals] for k, vals in table.items() if k != axis.x_column}
    if not series or not x:
        raise DomainError("empty plot: need at least one row and one series column")
    for name, vals in series.items():
        if len(vals) != len(x):
            raise ShapeError(f"series {name!r} has {len(vals)} values for {len(x)} x values")
        if not all(math.isfinite(v) for v in vals):
            raise DomainError(f"series {name!r} contains non-finite values")
    if not all(math.isfinite(v) for v in x):
        raise DomainError("x column contains non-finite values")

    all_y = [v for vals in series.values() for v in vals]
    x_lo, x_hi = min(x), max(x)
    y_lo, y_hi = min(all_y), max(all_y)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad_x = 0.05 * (x_hi - x_lo)
    pad_y = 0.05 * (y_hi - y_lo)
    x_lo, x_hi = x_lo - pad_x, x_hi + pad_x
    y_lo, y_hi = y_lo - pad_y, y_hi + pad_y

    px_lo, px_hi = _MARGIN_L, _WIDTH - _MARGIN_R
    py_lo, py_hi = _HEIGHT - _MARGIN_B, _MARGIN_T  # y axis points up

    def to_px(xv, yv):
        return (_scale(xv, x_lo, x_hi, px_lo, px_hi), _scale(yv, y_lo, y_hi, py_lo, py_hi))

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<line x1="{px_lo}" y1="{py_lo}" x2="{px_hi}" y2="{py_lo}" stroke="black"/>',
        f'<line x1="{px_lo}" y1="{py_lo}" x2="{px_lo}" y2="{py_hi}" stroke="black"/>',
    ]
    if axis.title:
        parts.append(f'<text x="{_WIDTH // 2}" y="20" text-anchor="middle" '
                     f'font-size="14">{axis.title}</text>')
    for i in range(5):
        frac = i / 4.0
        xv = x_lo + frac * (x_hi - x_lo)
        yv = y_lo + frac * (y_hi - y_lo)
        xp = _scale(xv, x_lo, x_hi, px_lo, px_hi)
        yp = _scale(yv, y_lo, y_hi, py_lo, py_hi)
        parts.append(f'<line x1="{xp:.2f}" y1="{py_lo}" x2="{xp:.2f}" y2="{py_lo + 4}" stroke="black"/>')
        parts.append(f'<text x="{xp:.2f}" y="{py_lo + 18}" text-anchor="middle" '
                     f'font-size="11">{_fmt(xv)}</text>')
        parts.append(f'<line x1="{px_lo - 4}" y1="{yp:.2f}" x2="{px_lo}" y2="{yp:.2f}" stroke="black"/>')
        parts.append(f'<text x="{px_lo - 8}" y="{yp:.2f}" text-anchor="end" dominant-baseline="middle" '
                     f'font-size="11">{_fmt(yv)}</text>')
    if axis.x_label:
        parts.append(f'<text x="{(px_lo + px_hi) // 2}" y="{_HEIGHT - 10}" text-anchor="middle" '
                     f'font-size="12">{axis.x_label}</text>')
    if axis.y_label:
        parts.append(f'<text x="16" y="{(py_lo + py_hi) // 2}" text-anchor="middle" font-size="12" '
                     f'transform="rotate(-90 16 {(py_lo + py_hi) // 2})">{axis.y_label}</text>')

    for idx, (name, vals) in enumerate(series.items()):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = [to_px(xv, yv) for xv, yv in zip(x, vals)]
        if len(pts) == 1:
            xp, yp = pts[0]
            parts.append(f'<circle cx="{xp:.2f}" cy="{yp:.2f}" r="3.5" fill="{color}"/>')
        else:
            coords = " ".join(f"{xp:.2f},{yp:.2f}" for xp, yp in pts)
            parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = _MARGIN_T + 14 + 16 * idx
        lx = _WIDTH - _MARGIN_R + 8
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 22}" y="{ly}" font-size="11">{name}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
