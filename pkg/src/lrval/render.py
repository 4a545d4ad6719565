"""ASCII and SVG drawings of fillings.

Row ``j`` of a diagram starts at the origin, runs through ``mu_j`` and then
through the parts ``k_1j, ..., k_jj`` in order; its signed end is
``lambda_j``.  Negative lengths are drawn as shaded, thinner boxes running
back towards the origin.  Output depends only on the input (no timestamps,
no randomness), so identical inputs give identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .combin import LRFilling
from .valfield import format_rational

__all__ = ["DiagramSpec", "Piece", "layout", "render_ascii", "render_svg"]


@dataclass(frozen=True)
class DiagramSpec:
    filling: LRFilling
    origin_line: bool = True
    labels: bool = True
    scale: Fraction = Fraction(1)
    highlight_strip: Optional[int] = None


@dataclass(frozen=True)
class Piece:
    row: int          # diagram row, 1-based
    strip: int        # 0 for the mu part, i for the i-strip
    start: Fraction   # signed position where the piece begins
    length: Fraction  # signed length (negative pieces run leftwards)

    @property
    def lo(self) -> Fraction:
        return min(self.start, self.start + self.length)

    @property
    def hi(self) -> Fraction:
        return max(self.start, self.start + self.length)

    @property
    def negative(self) -> bool:
        return self.length < 0


def layout(F: LRFilling) -> list:
    """Pieces of every row; the end of row ``j`` is ``lambda_j``."""
    pieces = []
    for j in range(1, F.r + 1):
        pos = Fraction(0)
        m = Fraction(F.mu[j - 1])
        pieces.append(Piece(j, 0, pos, m))
        pos += m
        for i in range(1, j + 1):
            k = Fraction(F.k(i, j))
            pieces.append(Piece(j, i, pos, k))
            pos += k
    return pieces


def _extent(pieces: list):
    lo = min([Fraction(0)] + [p.lo for p in pieces])
    hi = max([Fraction(0)] + [p.hi for p in pieces])
    return lo, hi


def _cell(x: Fraction, scale: Fraction) -> int:
    """Visual rounding to the nearest cell boundary (half up)."""
    v = x * scale
    return int((v + Fraction(1, 2)).__floor__())


_STRIP_CHARS = "123456789abcdefghijklmnopqrstuvwxyz"


def render_ascii(spec: DiagramSpec) -> str:
    F = spec.filling
    scale = Fraction(spec.scale)
    pieces = layout(F)
    lo, hi = _extent(pieces)
    c0 = _cell(lo, scale)
    width = _cell(hi, scale) - c0
    origin = -c0
    lines = []
    for j in range(1, F.r + 1):
        row = [" "] * max(width, 0)
        for p in (q for q in pieces if q.row == j):
            a, b = _cell(p.lo, scale) - c0, _cell(p.hi, scale) - c0
            if p.negative:
                ch = "~"
            elif p.strip == 0:
                ch = "."
            else:
                ch = _STRIP_CHARS[(p.strip - 1) % len(_STRIP_CHARS)]
            for c in range(a, b):
                # later pieces overwrite earlier ones where negative pieces fold back
                row[c] = ch
        if spec.origin_line and 0 <= origin <= len(row):
            row.insert(origin, "|")
        text = "".join(row).rstrip()
        if spec.labels:
            parts = [f"mu_{j}={format_rational(F.mu[j - 1])}"]
            parts += [f"k{i}{j}={format_rational(F.k(i, j))}" for i in range(1, j + 1)]
            parts.append(f"lambda_{j}={format_rational(F.lam[j - 1])}")
            text = text.ljust(width + 1) + "   " + " ".join(parts)
        lines.append(text.rstrip())
    return "\n".join(lines) + "\n"


def _num(x: Fraction) -> str:
    """Deterministic decimal for SVG geometry (exact values live in data-* attributes)."""
    x = Fraction(x)
    s = f"{float(x):.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


_PALETTE = ["#ffffff", "#9ecae1", "#a1d99b", "#fdae6b", "#bcbddc", "#fc9272", "#c7e9c0", "#fdd0a2", "#dadaeb"]


def render_svg(spec: DiagramSpec) -> str:
    F = spec.filling
    unit = Fraction(24) * Fraction(spec.scale)
    row_h = Fraction(24)
    pieces = layout(F)
    lo, hi = _extent(pieces)
    margin = Fraction(10)
    label_w = Fraction(0)
    if spec.labels:
        label_w = Fraction(16 * max(len(_row_label(F, j)) for j in range(1, F.r + 1)) // 2)
    width = (hi - lo) * unit + 2 * margin + label_w
    height = F.r * row_h + 2 * margin
    ox = margin - lo * unit

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_num(width)}" height="{_num(height)}" '
        f'viewBox="0 0 {_num(width)} {_num(height)}">',
        f'<rect x="0" y="0" width="{_num(width)}" height="{_num(height)}" fill="#ffffff"/>',
    ]
    for p in pieces:
        if p.length == 0:
            continue
        y = margin + (p.row - 1) * row_h
        h = row_h
        if p.negative:
            fill = "#b0b0b0"
            y += row_h / 4
            h = row_h / 2
        else:
            fill = _PALETTE[p.strip % len(_PALETTE)] if p.strip else "#eeeeee"
            if spec.highlight_strip and p.strip == spec.highlight_strip:
                fill = "#636363"
        x = ox + p.lo * unit
        out.append(
            f'<rect x="{_num(x)}" y="{_num(y)}" width="{_num((p.hi - p.lo) * unit)}" height="{_num(h)}" '
            f'fill="{fill}" stroke="#000000" stroke-width="1" '
            f'data-row="{p.row}" data-strip="{p.strip}" data-start="{format_rational(p.start)}" '
            f'data-length="{format_rational(p.length)}"/>'
        )
        if spec.labels and p.strip and not p.negative and (p.hi - p.lo) * unit >= 12:
            out.append(
                f'<text x="{_num(x + (p.hi - p.lo) * unit / 2)}" y="{_num(y + row_h * 2 / 3)}" '
                f'font-size="10" text-anchor="middle">{p.strip}</text>'
            )
    if spec.origin_line:
        out.append(
            f'<line x1="{_num(ox)}" y1="{_num(margin / 2)}" x2="{_num(ox)}" y2="{_num(height - margin / 2)}" '
            f'stroke="#d62728" stroke-width="2" data-origin="0"/>'
        )
    if spec.labels:
        lx = margin + (hi - lo) * unit + margin
        for j in range(1, F.r + 1):
            y = margin + (j - 1) * row_h + row_h * 2 / 3
            out.append(f'<text x="{_num(lx)}" y="{_num(y)}" font-size="10">{_row_label(F, j)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _row_label(F: LRFilling, j: int) -> str:
    return f"lambda_{j}={format_rational(F.lam[j - 1])}"
