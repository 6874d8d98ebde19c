"""Exact rational plane geometry.

Everything here works over :class:`fractions.Fraction`; floats are refused at
the boundary.  Polygons are centrally symmetric about the origin and stored in
counterclockwise order.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    IrrationalInput,
    NotCentered,
    NotCentrallySymmetric,
    NotStrictlyConvex,
    SingularMap,
    TooFewPoints,
    VerticesNotOnLattice,
)

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def rat(value) -> Fraction:
    """Coerce ``value`` to a Fraction without ever going through floating point."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise IrrationalInput(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise IrrationalInput(f"not an exact rational string: {value!r}")
        result = Fraction(value.replace(" ", ""))
        return result
    raise IrrationalInput(f"refusing inexact value {value!r} ({type(value).__name__})")


def format_rational(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True, order=True, slots=True)
class Rat2:
    """A point or vector with exact rational coordinates."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", rat(self.x))
        object.__setattr__(self, "y", rat(self.y))

    def __add__(self, other: Rat2) -> Rat2:
        return Rat2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Rat2) -> Rat2:
        return Rat2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> Rat2:
        return Rat2(-self.x, -self.y)

    def __mul__(self, k) -> Rat2:
        k = rat(k)
        return Rat2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k) -> Rat2:
        k = rat(k)
        return Rat2(self.x / k, self.y / k)

    def dot(self, other: Rat2) -> Fraction:
        return self.x * other.x + self.y * other.y

    def cross(self, other: Rat2) -> Fraction:
        return self.x * other.y - self.y * other.x

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def to_strings(self) -> list[str]:
        return [format_rational(self.x), format_rational(self.y)]

    def __repr__(self):
        return f"({self.x}, {self.y})"


ORIGIN = Rat2(0, 0)


def pt(x, y) -> Rat2:
    return Rat2(rat(x), rat(y))


def points(pairs: Iterable) -> list[Rat2]:
    return [p if isinstance(p, Rat2) else pt(*p) for p in pairs]


def _half(v: Rat2) -> int:
    # 0 for directions in [0, pi), 1 for [pi, 2pi)
    return 0 if (v.y > 0 or (v.y == 0 and v.x > 0)) else 1


def angle_key(v: Rat2):
    """Sort key ordering nonzero vectors by polar angle, exactly."""
    return _AngleKey(v)


class _AngleKey:
    __slots__ = ("v", "h")

    def __init__(self, v: Rat2):
        self.v = v
        self.h = _half(v)

    def __lt__(self, other: _AngleKey) -> bool:
        if self.h != other.h:
            return self.h < other.h
        return self.v.cross(other.v) > 0

    def __eq__(self, other) -> bool:
        return self.h == other.h and self.v.cross(other.v) == 0


def signed_area(vertices: Sequence[Rat2]) -> Fraction:
    n = len(vertices)
    total = Fraction(0)
    for i in range(n):
        total += vertices[i].cross(vertices[(i + 1) % n])
    return total / 2


def winding_of_turns(edges: Sequence[Rat2]) -> int:
    """Number of full turns made by a closed sequence of edge directions.

    Assumes every consecutive pair turns left by less than pi.
    """
    n = len(edges)
    return sum(1 for i in range(n) if _half(edges[i]) == 1 and _half(edges[(i + 1) % n]) == 0)


def is_strictly_convex_ccw(vertices: Sequence[Rat2]) -> bool:
    n = len(vertices)
    if n < 3:
        return False
    edges = [vertices[(i + 1) % n] - vertices[i] for i in range(n)]
    if any(e.is_zero() for e in edges):
        return False
    for i in range(n):
        if edges[i].cross(edges[(i + 1) % n]) <= 0:
            return False
    return winding_of_turns(edges) == 1


@dataclass(frozen=True)
class CSPolygon:
    """Centrally symmetric, strictly convex polygon centred at the origin.

    ``vertices`` are in counterclockwise order and ``vertices[i + m] == -vertices[i]``.
    Construct through :func:`polygon_from_points` unless the order is already known.
    """

    vertices: tuple[Rat2, ...]

    def __post_init__(self):
        vs = tuple(self.vertices)
        object.__setattr__(self, "vertices", vs)
        n = len(vs)
        if n < 4:
            raise TooFewPoints(f"need at least 4 vertices, got {n}")
        if n % 2:
            raise NotCentrallySymmetric(f"odd vertex count {n}")
        m = n // 2
        for i in range(m):
            if vs[i + m] != -vs[i]:
                raise NotCentrallySymmetric(f"vertex {i + m} is not the reflection of vertex {i}")
        if not is_strictly_convex_ccw(vs):
            raise NotStrictlyConvex("vertices are not a strictly convex counterclockwise cycle")

    @property
    def m(self) -> int:
        return len(self.vertices) // 2

    @property
    def n(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> Rat2:
        return self.vertices[i % len(self.vertices)]

    def edge(self, i: int) -> Rat2:
        return self.vertex(i + 1) - self.vertex(i)

    def midpoint(self, i: int) -> Rat2:
        return (self.vertex(i) + self.vertex(i + 1)) / 2

    @property
    def edges(self) -> list[Rat2]:
        return [self.edge(i) for i in range(self.n)]

    @property
    def midpoints(self) -> list[Rat2]:
        return [self.midpoint(i) for i in range(self.n)]

    @property
    def area(self) -> Fraction:
        return area(self)

    def bbox(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def key(self) -> tuple:
        """Vertex tuple starting at the lexicographically smallest vertex."""
        i = min(range(self.n), key=lambda j: self.vertices[j])
        return tuple((v.x, v.y) for v in self.vertices[i:] + self.vertices[:i])

    def __repr__(self):
        return "CSPolygon([" + ", ".join(repr(v) for v in self.vertices) + "])"


def polygon_from_points(pts: Iterable) -> CSPolygon:
    """Order an unordered, negation-closed point set into a :class:`CSPolygon`.

    The angular order around the origin is recomputed with exact comparisons;
    the input order is ignored.  Points that fail to be hull vertices (inside,
    or on an edge between two others) are rejected.
    """
    ps = points(pts)
    unique = sorted(set(ps))
    if len(unique) < 4:
        raise TooFewPoints(f"need at least 4 distinct points, got {len(unique)}")
    present = set(unique)
    for p in unique:
        if -p not in present:
            raise NotCentrallySymmetric(f"{p!r} has no antipode {(-p)!r}")
    if ORIGIN in present or len(unique) % 2:
        raise NotCentrallySymmetric("the origin cannot be a vertex")
    ordered = sorted(unique, key=angle_key)
    for a, b in zip(ordered, ordered[1:]):
        if a.cross(b) == 0 and a.dot(b) > 0:
            raise NotStrictlyConvex(f"{a!r} and {b!r} lie on one ray from the centre")
    if not is_strictly_convex_ccw(ordered):
        raise NotStrictlyConvex("some point is not a strict vertex of the convex hull")
    return CSPolygon(tuple(ordered))


def area(P: CSPolygon) -> Fraction:
    """Shoelace area; twice the sum of consecutive cross products over half a cycle."""
    m = P.m
    half = sum((P.vertex(i).cross(P.vertex(i + 1)) for i in range(m)), Fraction(0))
    return half


def convex_hull(pts: Iterable) -> list[Rat2]:
    """Strict convex hull (no collinear vertices), counterclockwise."""
    ps = sorted(set(points(pts)))
    if len(ps) <= 2:
        return ps

    def chain(seq):
        out: list[Rat2] = []
        for p in seq:
            while len(out) >= 2 and (out[-1] - out[-2]).cross(p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(ps)
    upper = chain(reversed(ps))
    return lower[:-1] + upper[:-1]


class Location(NamedTuple):
    """Result of :func:`point_location`.

    ``kind`` is one of ``"interior"``, ``"edge"``, ``"vertex"``, ``"exterior"``.
    For ``"edge"`` the point is ``v[index] + t * (v[index+1] - v[index])`` with
    ``0 < t < 1``; for ``"vertex"`` it equals ``v[index]``.
    """

    kind: str
    index: int | None = None
    t: Fraction | None = None


INTERIOR = Location("interior")
EXTERIOR = Location("exterior")


def locate_in_convex(vertices: Sequence[Rat2], p: Rat2) -> Location:
    n = len(vertices)
    signs = []
    for i in range(n):
        a = vertices[i]
        c = (vertices[(i + 1) % n] - a).cross(p - a)
        if c < 0:
            return EXTERIOR
        signs.append(c)
    zeros = [i for i, c in enumerate(signs) if c == 0]
    if not zeros:
        return INTERIOR
    if len(zeros) == 1:
        i = zeros[0]
        e = vertices[(i + 1) % n] - vertices[i]
        return Location("edge", i, (p - vertices[i]).dot(e) / e.dot(e))
    # two consecutive supporting lines meet only at their shared vertex
    i, j = zeros[0], zeros[1]
    shared = j if j == i + 1 else i
    return Location("vertex", shared % n)


def point_location(P: CSPolygon, p: Rat2) -> Location:
    return locate_in_convex(P.vertices, p)


@dataclass(frozen=True, eq=False)
class Lattice:
    """Rank-2 lattice spanned by two rational vectors."""

    b1: Rat2
    b2: Rat2

    def __post_init__(self):
        if self.b1.cross(self.b2) == 0:
            raise SingularMap("lattice basis vectors are linearly dependent")

    @classmethod
    def integer(cls) -> Lattice:
        return cls(pt(1, 0), pt(0, 1))

    @classmethod
    def from_generators(cls, gens: Sequence[Rat2]) -> Lattice | None:
        """Lattice spanned by rational generators, or None if their rank is below 2."""
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            return None
        denom = 1
        for g in gens:
            denom = math.lcm(denom, g.x.denominator, g.y.denominator)
        ints = [(int(g.x * denom), int(g.y * denom)) for g in gens]
        basis = _integer_span_basis(ints)
        if basis is None:
            return None
        (a, b), (c, d) = basis
        return cls(Rat2(Fraction(a, denom), Fraction(b, denom)), Rat2(Fraction(c, denom), Fraction(d, denom)))

    @property
    def basis(self) -> tuple[Rat2, Rat2]:
        return self.b1, self.b2

    @property
    def det(self) -> Fraction:
        return abs(self.b1.cross(self.b2))

    def coords(self, p: Rat2) -> tuple[Fraction, Fraction]:
        d = self.b1.cross(self.b2)
        return p.cross(self.b2) / d, self.b1.cross(p) / d

    def point(self, a, c) -> Rat2:
        return self.b1 * a + self.b2 * c

    def contains(self, p: Rat2, half: bool = False) -> bool:
        a, c = self.coords(p * 2 if half else p)
        return a.denominator == 1 and c.denominator == 1

    def canonical_basis(self) -> tuple[Rat2, Rat2]:
        """Unique basis ``(a, 0), (b, c)`` with ``a > 0``, ``c > 0``, ``0 <= b < a``."""
        u, v = self.b1, self.b2
        while v.y != 0:
            q = u.y // v.y
            u, v = v, u - v * q
        # now v.y == 0, u spans the y-direction
        if v.x < 0:
            v = -v
        if u.y < 0:
            u = -u
        u = u - v * (u.x // v.x)
        return v, u

    def key(self) -> tuple:
        a, b = self.canonical_basis()
        return (a.x, b.x, b.y)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        a, b = self.canonical_basis()
        return f"Lattice({a!r}, {b!r})"


def _integer_span_basis(vectors: Sequence[tuple[int, int]]):
    """Basis of the Z-span of integer vectors (upper triangular), or None if rank < 2."""
    rows = [list(v) for v in vectors if v != (0, 0)]
    # eliminate the y coordinate down to a single row
    pivot = None
    rest = []
    for r in rows:
        if r[1] == 0:
            rest.append(r)
            continue
        if pivot is None:
            pivot = r
            continue
        a, b = pivot, r
        while b[1] != 0:
            q = a[1] // b[1]
            a, b = b, [a[0] - q * b[0], a[1] - q * b[1]]
        pivot = a
        rest.append(b)
    if pivot is None:
        return None
    g = 0
    for r in rest:
        g = math.gcd(g, r[0])
    if g == 0:
        return None
    if pivot[1] < 0:
        pivot = [-pivot[0], -pivot[1]]
    return (g, 0), (pivot[0] % g, pivot[1])


@dataclass(frozen=True)
class AffineMap:
    """``p -> A p + t`` with a rational 2x2 matrix ``A = ((a, b), (c, d))``."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    tx: Fraction = Fraction(0)
    ty: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "tx", "ty"):
            object.__setattr__(self, name, rat(getattr(self, name)))
        if self.det == 0:
            raise SingularMap("affine map has zero determinant")

    @classmethod
    def linear(cls, a, b, c, d) -> AffineMap:
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> AffineMap:
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def is_linear(self) -> bool:
        return self.tx == 0 and self.ty == 0

    @property
    def is_unimodular(self) -> bool:
        entries = (self.a, self.b, self.c, self.d)
        return all(e.denominator == 1 for e in entries) and abs(self.det) == 1

    def __call__(self, p: Rat2) -> Rat2:
        return Rat2(self.a * p.x + self.b * p.y + self.tx, self.c * p.x + self.d * p.y + self.ty)

    def linear_part(self, v: Rat2) -> Rat2:
        return Rat2(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)

    def compose(self, other: AffineMap) -> AffineMap:
        """``self ∘ other``."""
        t = self(Rat2(other.tx, other.ty))
        return AffineMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            t.x,
            t.y,
        )

    def __matmul__(self, other: AffineMap) -> AffineMap:
        return self.compose(other)

    def inverse(self) -> AffineMap:
        D = self.det
        a, b, c, d = self.d / D, -self.b / D, -self.c / D, self.a / D
        tx = -(a * self.tx + b * self.ty)
        ty = -(c * self.tx + d * self.ty)
        return AffineMap(a, b, c, d, tx, ty)

    def map_lattice(self, L: Lattice) -> Lattice:
        return Lattice(self.linear_part(L.b1), self.linear_part(L.b2))


def apply_affine(P: CSPolygon, T: AffineMap) -> CSPolygon:
    """Image of ``P`` under a linear map; area scales by ``|det T|``."""
    if not T.is_linear:
        raise NotCentered("a map with a translation part moves the centre off the origin")
    return polygon_from_points(T(v) for v in P.vertices)


def lattice_contains(L: Lattice, p: Rat2, half: bool = False) -> bool:
    return L.contains(p, half)


def to_lattice_frame(L: Lattice) -> AffineMap:
    """Linear map sending ``L`` onto the integer lattice (basis to unit vectors)."""
    return AffineMap(L.b1.x, L.b2.x, L.b1.y, L.b2.y).inverse()


@dataclass(frozen=True)
class PickCount:
    """Lattice point census of a lattice polygon.

    ``area`` is measured in fundamental cells (area divided by ``det``), so
    Pick's identity reads ``area == interior + boundary / 2 - 1``.
    """

    interior: int
    boundary: int
    area: Fraction

    @property
    def pick_area(self) -> Fraction:
        return self.interior + Fraction(self.boundary, 2) - 1


def _ccw_convex(vertices: Sequence[Rat2]) -> list[Rat2]:
    hull = convex_hull(vertices)
    if len(hull) != len(set(vertices)):
        raise NotStrictlyConvex("points are not in convex position")
    return hull


def pick_count(P, L: Lattice | None = None) -> PickCount:
    """Count interior and boundary lattice points of a convex lattice polygon.

    ``P`` may be a :class:`CSPolygon` or any sequence of vertices in convex
    position.  Counting is done by enumeration over the bounding box in
    lattice coordinates.
    """
    L = L or Lattice.integer()
    verts = list(P.vertices) if isinstance(P, CSPolygon) else points(P)
    for v in verts:
        if not L.contains(v):
            raise VerticesNotOnLattice(f"{v!r} is not a lattice point")
    frame = to_lattice_frame(L)
    local = _ccw_convex([frame(v) for v in verts])
    xs = [int(v.x) for v in local]
    ys = [int(v.y) for v in local]
    interior = boundary = 0
    for i in range(min(xs), max(xs) + 1):
        for j in range(min(ys), max(ys) + 1):
            kind = locate_in_convex(local, Rat2(i, j)).kind
            if kind == "interior":
                interior += 1
            elif kind != "exterior":
                boundary += 1
    return PickCount(interior, boundary, abs(signed_area(local)))


def primitive_direction(v: Rat2) -> tuple[int, int]:
    """The primitive integer vector pointing along the nonzero rational vector ``v``."""
    denom = math.lcm(v.x.denominator, v.y.denominator)
    a, b = int(v.x * denom), int(v.y * denom)
    g = math.gcd(a, b)
    return a // g, b // g


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _edge_normalizer(e: Rat2, f: Rat2) -> AffineMap:
    """The unique unimodular map sending ``e`` to the positive x-axis and ``f``
    to ``(x, y)`` with ``y > 0`` and ``0 <= x < y``."""
    p, q = primitive_direction(e)
    g, s, t = _xgcd(p, q)
    if g < 0:
        s, t = -s, -t
    U = AffineMap(s, t, -q, p)
    fy = U.linear_part(f)
    eps = 1 if fy.y > 0 else -1
    U = AffineMap(1, 0, 0, eps) @ U
    fy = U.linear_part(f)
    shift = -(fy.x // fy.y)
    return AffineMap(1, shift, 0, 1) @ U


def normal_form(P: CSPolygon, reflections: bool = True) -> CSPolygon:
    """Representative of ``P`` under the unimodular group.

    For every edge and traversal direction there is exactly one unimodular
    map putting that edge on the positive x-axis and the following edge in a
    fixed fundamental strip; the lexicographically smallest image is
    returned.  Counterclockwise traversals give the determinant +1 maps, so
    ``reflections=False`` yields the SL(2, Z) form.  Works for any rational
    polygon; exact and complete.
    """
    best = None
    vs = list(P.vertices)
    for seq in ((vs, vs[::-1]) if reflections else (vs,)):
        n = len(seq)
        for i in range(n):
            e = seq[(i + 1) % n] - seq[i]
            f = seq[(i + 2) % n] - seq[(i + 1) % n]
            W = _edge_normalizer(e, f)
            image = polygon_from_points(W(v) for v in vs)
            k = image.key()
            if best is None or k < best[0]:
                best = (k, image)
    return best[1]


def canonical_form(P: CSPolygon, reflections: bool = True) -> CSPolygon:
    """Canonical form of a lattice polygon (vertices in Z^2).

    The full group GL(2, Z) is quotiented out by default; pass
    ``reflections=False`` to keep mirror images apart.
    """
    for v in P.vertices:
        if not v.is_integral():
            raise VerticesNotOnLattice(f"{v!r} is not an integer point")
    return normal_form(P, reflections)


def unimodular_equivalent(P: CSPolygon, Q: CSPolygon, reflections: bool = True) -> bool:
    return normal_form(P, reflections).key() == normal_form(Q, reflections).key()


def find_unimodular_map(P: CSPolygon, Q: CSPolygon, reflections: bool = True) -> AffineMap | None:
    """A unimodular linear map sending ``P`` onto ``Q``, if one exists."""
    target = Q.key()
    vs = list(P.vertices)
    for seq in ((vs, vs[::-1]) if reflections else (vs,)):
        n = len(seq)
        for i in range(n):
            W = _edge_normalizer(seq[(i + 1) % n] - seq[i], seq[(i + 2) % n] - seq[(i + 1) % n])
            qs = list(Q.vertices)
            for rs in ((qs, qs[::-1]) if reflections else (qs,)):
                for j in range(n):
                    V = _edge_normalizer(rs[(j + 1) % n] - rs[j], rs[(j + 2) % n] - rs[(j + 1) % n])
                    M = V.inverse() @ W
                    if M.is_unimodular and polygon_from_points(M(v) for v in vs).key() == target:
                        return M
    return None
