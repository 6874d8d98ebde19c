"""The parametric octagon families and the midpoint-specified decagons.

A centrally symmetric polygon with an odd number ``m`` of edge pairs is
determined by its edge midpoints up to one free vertex: walking around the
boundary, ``v[i+1] = 2 u[i] - v[i]``.  Every convexity condition is affine
in that free vertex, so the admissible positions form an open convex
polygon, the freedom region.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ClosureViolated, GeometryError, NotStrictlyConvex, ParameterOutOfRange
from .geometry import (
    CSPolygon,
    Lattice,
    Rat2,
    is_strictly_convex_ccw,
    points,
    polygon_from_points,
    pt,
    rat,
    signed_area,
    winding_of_turns,
)
from .regions import HalfPlane, intersect, rotate_to_min

F = Fraction


@dataclass(frozen=True)
class ParametricFamily:
    """Polygons whose half-cycle vertices are ``base[i] + t * slope[i]``.

    ``interval`` is open; instantiation outside it raises
    :class:`ParameterOutOfRange`.
    """

    name: str
    symbol: str
    base: tuple[Rat2, ...]
    slope: tuple[Rat2, ...]
    interval: tuple[Fraction, Fraction]
    k: int
    lattice: Lattice | None = None
    note: str = ""

    def vertex_functions(self) -> list[tuple[Rat2, Rat2]]:
        return list(zip(self.base, self.slope))

    def half_cycle(self, t) -> list[Rat2]:
        t = rat(t)
        return [b + s * t for b, s in zip(self.base, self.slope)]

    def raw(self, t) -> CSPolygon:
        """Instantiate without the interval check; may raise a geometry error."""
        half = self.half_cycle(t)
        return polygon_from_points(half + [-v for v in half])

    def contains(self, t) -> bool:
        lo, hi = self.interval
        return lo < rat(t) < hi

    def instantiate(self, t) -> CSPolygon:
        t = rat(t)
        if not self.contains(t):
            lo, hi = self.interval
            raise ParameterOutOfRange(f"{self.symbol}={t} outside the open interval ({lo}, {hi})")
        return self.raw(t)

    def degenerates_at(self, t) -> bool:
        try:
            P = self.raw(t)
        except GeometryError:
            return True
        return P.n != 2 * len(self.base)

    def sample(self, count: int) -> list[Fraction]:
        """``count`` evenly spaced interior parameters."""
        lo, hi = self.interval
        return [lo + (hi - lo) * F(i, count + 1) for i in range(1, count + 1)]


def _family(name, symbol, rows, interval, k, note=""):
    base = tuple(pt(x0, y0) for (x0, y0, _, _) in rows)
    slope = tuple(pt(dx, dy) for (_, _, dx, dy) in rows)
    return ParametricFamily(name, symbol, base, slope, (F(interval[0]), F(interval[1])), k, Lattice.integer(), note)


# rows are (x0, y0, dx, dy): vertex = (x0 + dx*t, y0 + dy*t)
OCTAGON_FAMILIES = {
    "six_fold_corrected": _family(
        "octagon6", "alpha",
        [(0, -2, -1, 0), (1, -2, -1, 0), (1, -1, 1, 0), (1, 0, -1, 0)],
        (0, F(1, 6)), 6,
    ),
    "six_fold_as_printed": _family(
        "octagon6-printed", "alpha",
        [(-1, 2, 1, 0), (0, -2, 1, 0), (1, -1, 1, 0), (1, 0, -1, 0)],
        (0, F(1, 6)), 6,
        "coordinates exactly as published; area 6 - 4*alpha, not a six-fold tile",
    ),
    "six_fold_tall": _family(
        "octagon6-tall", "gamma",
        [(F(-5, 4), F(-5, 2), 1, 0), (F(-1, 4), F(-5, 2), 1, 0), (F(1, 4), F(-3, 2), -1, 0), (F(3, 4), F(1, 2), 1, 0)],
        (0, F(1, 12)), 6,
        "lattice edge at height 5/2; found by the octagon sweep, absent from the published list",
    ),
    "five_fold_beta": _family(
        "octagon5-beta", "beta",
        [(0, -2, 1, 0), (1, -2, 1, 0), (1, 0, -1, 0), (0, 1, 1, 0)],
        (F(1, 4), F(1, 3)), 5,
    ),
    "five_fold_alpha": _family(
        "octagon5-alpha", "alpha",
        [(0, F(-3, 2), -1, 0), (1, F(-3, 2), -1, 0), (1, F(-1, 2), 1, 0), (1, F(1, 2), -1, 0)],
        (0, F(1, 4)), 5,
    ),
}


def octagon_family(variant: str, parameter) -> CSPolygon:
    try:
        fam = OCTAGON_FAMILIES[variant]
    except KeyError:
        raise KeyError(f"unknown octagon variant {variant!r}; choose from {sorted(OCTAGON_FAMILIES)}") from None
    return fam.instantiate(parameter)


@dataclass(frozen=True)
class MidpointSpec:
    """Half-cycle edge midpoints ``u[0..m-1]``; the rest are their negatives."""

    midpoints: tuple[Rat2, ...]

    def __post_init__(self):
        object.__setattr__(self, "midpoints", tuple(points(self.midpoints)))

    @property
    def m(self) -> int:
        return len(self.midpoints)

    @property
    def full(self) -> list[Rat2]:
        return list(self.midpoints) + [-u for u in self.midpoints]

    def u(self, i: int) -> Rat2:
        return self.full[i % (2 * self.m)]

    @property
    def closure_sum(self) -> Rat2:
        total = Rat2(0, 0)
        for i, u in enumerate(self.midpoints):
            total = total + (u if i % 2 == 0 else -u)
        return total

    def check_closure(self):
        if self.m % 2 == 0:
            raise ClosureViolated(f"an even number ({self.m}) of midpoint pairs does not fix a one-parameter vertex set")
        s = self.closure_sum
        if not s.is_zero():
            raise ClosureViolated(f"alternating midpoint sum is {s!r}, not (0, 0)")

    @property
    def orientation(self) -> int:
        """+1 if the midpoints run counterclockwise, -1 if clockwise."""
        a = signed_area(self.full)
        return 1 if a > 0 else -1

    def doubled(self) -> list[Rat2]:
        return [u * 2 for u in self.midpoints]


FAMILY_MIDPOINTS = {
    "A": MidpointSpec(points([(-1, F(1, 2)), (F(1, 2), 1), (F(3, 2), 1), (2, F(1, 2)), (2, 0)])),
    "B": MidpointSpec(points([(F(1, 2), -1), (F(3, 2), F(-1, 2)), (2, 0), (F(3, 2), F(1, 2)), (F(1, 2), 1)])),
    "five": MidpointSpec(points([(0, 1), (1, 1), (F(3, 2), F(1, 2)), (F(3, 2), 0), (1, F(-1, 2))])),
}
FAMILY_K = {"A": 6, "B": 6, "five": 5}

# anchor of the published quadrilaterals: free vertex shared by edges u1/u2 (A) and u5/u6 (B)
FAMILY_ANCHORS = {"A": 0, "B": 4, "five": 0}

PUBLISHED_REGIONS = {
    "A": tuple(points([(0, 1), (0, F(5, 6)), (F(-1, 4), F(3, 4)), (F(-1, 3), F(5, 6))])),
    "B": tuple(points([(0, F(5, 4)), (F(1, 6), F(7, 6)), (0, 1), (F(-1, 6), F(7, 6))])),
}


def family_midpoints(which: str) -> MidpointSpec:
    try:
        return FAMILY_MIDPOINTS[which]
    except KeyError:
        raise KeyError(f"unknown decagon family {which!r}; choose from {sorted(FAMILY_MIDPOINTS)}") from None


def _affine_vertices(spec: MidpointSpec, anchor: int) -> list[tuple[Rat2, int]]:
    """Vertices as ``(c, s)`` meaning ``c + s*w``, listed from the free vertex on.

    Entry ``j`` is the vertex shared by edges ``anchor + j`` and ``anchor + j + 1``.
    """
    n = 2 * spec.m
    out = [(Rat2(0, 0), 1)]
    for j in range(1, n):
        c, s = out[-1]
        u = spec.u(anchor + j)
        out.append((u * 2 - c, -s))
    return out


@dataclass(frozen=True)
class FreedomRegion:
    """Open convex set of admissible free-vertex positions.

    ``anchor`` is the 0-based index ``a`` such that the free vertex is the
    common endpoint of the edges with midpoints ``u[a]`` and ``u[a+1]``.
    """

    anchor: int
    halfplanes: tuple[HalfPlane, ...]
    vertices: tuple[Rat2, ...]
    bounded: bool = True
    winding: int = 1

    @property
    def empty(self) -> bool:
        return not self.vertices

    def contains(self, w: Rat2) -> bool:
        return not self.empty and all(h.contains(w) for h in self.halfplanes)

    def on_boundary(self, w: Rat2) -> bool:
        vals = [h.value(w) for h in self.halfplanes]
        return not self.empty and min(vals) == 0

    @property
    def area(self) -> Fraction:
        return signed_area(self.vertices) if self.vertices else F(0)

    def interior_point(self) -> Rat2:
        if self.empty:
            raise GeometryError("freedom region is empty")
        n = len(self.vertices)
        sx = sum((v.x for v in self.vertices), F(0))
        sy = sum((v.y for v in self.vertices), F(0))
        return Rat2(sx / n, sy / n)

    def same_vertices(self, other: Sequence[Rat2]) -> bool:
        return set(self.vertices) == set(points(other)) and len(self.vertices) == len(other)


def freedom_region(spec: MidpointSpec, anchor_index: int = 0) -> FreedomRegion:
    spec.check_closure()
    m = spec.m
    anchor = anchor_index % m
    verts = _affine_vertices(spec, anchor)
    n = len(verts)
    sigma = spec.orientation
    hps = []
    for j in range(n):
        # turn at vertex j: edges (v[j-1] -> v[j]) and (v[j] -> v[j+1])
        c0, s0 = verts[j - 1]
        c1, s1 = verts[j]
        c2, s2 = verts[(j + 1) % n]
        a, b = c1 - c0, c2 - c1  # e_in = a + s1*2*w ... expanded below
        # v[j] - v[j-1] = (c1 - c0) + (s1 - s0) w with s1 = -s0
        # v[j+1] - v[j] = (c2 - c1) + (s2 - s1) w with s2 = -s1
        # cross(a + 2 s1 w, b - 2 s1 w) = cross(a, b) - 2 s1 cross(a + b, w)
        d = a + b
        normal = Rat2(2 * s1 * d.y, -2 * s1 * d.x)
        offset = a.cross(b)
        hps.append(HalfPlane(normal * sigma, offset * sigma))
    vertices, bounded = intersect(hps)
    region = FreedomRegion(anchor, tuple(hps), rotate_to_min(vertices), bounded)
    if vertices:
        w = region.interior_point()
        edges = _vertex_loop(spec, anchor, w)
        edges = [edges[(i + 1) % n] - edges[i] for i in range(n)]
        if sigma < 0:
            edges = [-e for e in reversed(edges)]
        wind = winding_of_turns(edges)
        if wind != 1:
            region = FreedomRegion(anchor, tuple(hps), (), bounded, wind)
    return region


def _vertex_loop(spec: MidpointSpec, anchor: int, w: Rat2) -> list[Rat2]:
    """Vertices in spec order, starting with the vertex shared by edges 0 and 1."""
    verts = [c + w * s for c, s in _affine_vertices(spec, anchor)]
    n = len(verts)
    # entry j sits between edges anchor+j and anchor+j+1; rotate so entry 0 sits between edges 0 and 1
    shift = (-anchor) % n
    return verts[shift:] + verts[:shift]


def decagon_from_midpoints(spec: MidpointSpec, free_vertex: Rat2, anchor_index: int = 0) -> CSPolygon:
    """Polygon with the given edge midpoints and free vertex at junction ``anchor_index``.

    The returned polygon's vertex ``i`` is the start of the edge with midpoint
    ``u[i]`` when the midpoint list runs counterclockwise.
    """
    spec.check_closure()
    anchor = anchor_index % spec.m
    loop = _vertex_loop(spec, anchor, free_vertex)
    n = len(loop)
    # loop[j] is shared by edges j and j+1, i.e. it is the start of edge j+1
    starts = loop[-1:] + loop[:-1]
    ccw = starts if spec.orientation > 0 else list(reversed(starts))
    if not is_strictly_convex_ccw(ccw):
        crosses = [(ccw[(i + 1) % n] - ccw[i]).cross(ccw[(i + 2) % n] - ccw[(i + 1) % n]) for i in range(n)]
        if min(crosses) == 0 and all(c >= 0 for c in crosses):
            raise NotStrictlyConvex(f"free vertex {free_vertex!r} lies on the freedom region boundary")
        raise NotStrictlyConvex(f"free vertex {free_vertex!r} lies outside the freedom region")
    return CSPolygon(tuple(ccw))
