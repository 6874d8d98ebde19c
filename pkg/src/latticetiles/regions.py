"""Exact intersection of open half-planes in the plane."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import Rat2, convex_hull, signed_area


@dataclass(frozen=True)
class HalfPlane:
    """The open half-plane ``normal . w + offset > 0``."""

    normal: Rat2
    offset: Fraction

    def value(self, w: Rat2) -> Fraction:
        return self.normal.dot(w) + self.offset

    def contains(self, w: Rat2) -> bool:
        return self.value(w) > 0

    def __repr__(self):
        return f"HalfPlane({self.normal!r}.w + {self.offset} > 0)"


def _clip(poly: list[Rat2], hp: HalfPlane) -> list[Rat2]:
    # Sutherland-Hodgman against the closed half-plane
    out = []
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        va, vb = hp.value(a), hp.value(b)
        if va >= 0:
            out.append(a)
        if (va > 0 and vb < 0) or (va < 0 and vb > 0):
            t = va / (va - vb)
            out.append(a + (b - a) * t)
    return out


def intersect(halfplanes: Sequence[HalfPlane], box: Fraction | int = 10**6) -> tuple[list[Rat2], bool]:
    """Vertices (counterclockwise) of the closure of the intersection, and boundedness.

    The intersection is clipped to the square ``[-box, box]^2``; if the
    result reaches the square the region is reported as unbounded.  An empty
    vertex list means the open intersection is empty.
    """
    B = Fraction(box)
    poly = [Rat2(-B, -B), Rat2(B, -B), Rat2(B, B), Rat2(-B, B)]
    for hp in halfplanes:
        poly = _clip(poly, hp)
        if not poly:
            return [], True
    hull = convex_hull(poly)
    if len(hull) < 3 or signed_area(hull) == 0:
        return [], True
    bounded = all(abs(v.x) < B and abs(v.y) < B for v in hull)
    return hull, bounded


def rotate_to_min(vertices: Iterable[Rat2]) -> tuple[Rat2, ...]:
    vs = list(vertices)
    if not vs:
        return ()
    i = vs.index(min(vs))
    return tuple(vs[i:] + vs[:i])
