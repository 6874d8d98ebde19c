"""Deterministic SVG pictures of lattice arrangements with multiplicity shading."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .geometry import CSPolygon, Lattice, Rat2
from .tiling import TranslateCounter

SIZE = 600  # pixels per side


@dataclass
class RenderResult:
    svg: str
    counts: dict[int, int]  # multiplicity -> number of grid cells
    translates: int

    @property
    def uniform(self) -> bool:
        return len(self.counts) == 1


def _translates(P: CSPolygon, L: Lattice, half: Fraction) -> list[Rat2]:
    x0, y0, x1, y1 = P.bbox()
    counter = TranslateCounter(P, L)
    corners = [Rat2(sx * half, sy * half) for sx in (-1, 1) for sy in (-1, 1)]
    local = [counter.frame(c) for c in corners]
    r = max(max(abs(x0), abs(x1)), max(abs(y0), abs(y1)))
    pad = [counter.frame(Rat2(sx * r, sy * r)) for sx in (-1, 1) for sy in (-1, 1)]
    span = local + [Rat2(a.x + b.x, a.y + b.y) for a in local for b in pad]
    ilo, ihi = math.floor(min(p.x for p in span)) - 1, math.ceil(max(p.x for p in span)) + 1
    jlo, jhi = math.floor(min(p.y for p in span)) - 1, math.ceil(max(p.y for p in span)) + 1
    out = []
    for i in range(ilo, ihi + 1):
        for j in range(jlo, jhi + 1):
            t = L.point(i, j)
            if t.x + x1 > -half and t.x + x0 < half and t.y + y1 > -half and t.y + y0 < half:
                out.append(t)
    return sorted(out)


def multiplicity_grid(P: CSPolygon, L: Lattice, window, cells: int = 40) -> list[list[int]]:
    """Interior counts at cell centres of a ``cells x cells`` grid over ``[-w/2, w/2]^2``.

    Centres on some translate's boundary are nudged by a fixed tiny offset
    until they are generic, so the grid is reproducible.
    """
    half = Fraction(window) / 2
    counter = TranslateCounter(P, L)
    step = 2 * half / cells
    grid = []
    for r in range(cells):
        row = []
        y = half - (r + Fraction(1, 2)) * step
        for c in range(cells):
            x = -half + (c + Fraction(1, 2)) * step
            p = Rat2(x, y)
            nudge = 1
            while True:
                interior, boundary = counter.count(p)
                if not boundary:
                    break
                p = Rat2(x + Fraction(nudge, 7919 * cells), y + Fraction(nudge, 7907 * cells))
                nudge += 1
            row.append(interior)
        grid.append(row)
    return grid


def _shade(count: int, k: int | None) -> str:
    if k is not None and count != k:
        return "#d62728"
    level = min(count, 8) / 8
    g = int(235 - 150 * level)
    return f"rgb({g},{g},255)"


def render_svg(P: CSPolygon, L: Lattice, window=6, heat: bool = True, k: int | None = None,
               cells: int = 40, warning: str | None = None) -> RenderResult:
    half = Fraction(window) / 2
    scale = SIZE / (2 * half)

    def sx(x):
        return f"{float((x + half) * scale):.3f}"

    def sy(y):
        return f"{float((half - y) * scale):.3f}"

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
             f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>']
    counts: dict[int, int] = {}
    if heat:
        grid = multiplicity_grid(P, L, window, cells)
        w = SIZE / cells
        for r, row in enumerate(grid):
            for c, val in enumerate(row):
                counts[val] = counts.get(val, 0) + 1
                parts.append(f'<rect x="{c * w:.3f}" y="{r * w:.3f}" width="{w:.3f}" height="{w:.3f}" '
                             f'fill="{_shade(val, k)}" stroke="none"><title>{val}</title></rect>')
    ts = _translates(P, L, half)
    for t in ts:
        pts = " ".join(f"{sx(v.x + t.x)},{sy(v.y + t.y)}" for v in P.vertices)
        parts.append(f'<polygon points="{pts}" fill="none" stroke="#222" stroke-width="0.8"/>')
    pts = " ".join(f"{sx(v.x)},{sy(v.y)}" for v in P.vertices)
    parts.append(f'<polygon points="{pts}" fill="none" stroke="#1f77b4" stroke-width="2.5"/>')
    if warning:
        parts.append(f'<text x="8" y="20" font-family="monospace" font-size="14" fill="#d62728">{_escape(warning)}</text>')
    parts.append("</svg>")
    return RenderResult("\n".join(parts) + "\n", dict(sorted(counts.items())), len(ts))


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
