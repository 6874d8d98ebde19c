"""Parametric search for octagon lattice tiles of multiplicity k <= 6, and edge reduction.

Work on Z^2.  An octagon tile has a lattice-vector edge; after a unimodular
map it is the bottom edge ``v1 v2 = (l, 0)`` on the line ``y = y1 < 0``.
The parallelogram ``v1 v2 v5 v6`` has area ``2 l |y1|`` and sits strictly
inside the octagon, and the edge criterion forces ``2 y1`` and the three
rises ``y3 - y2, y4 - y3, y5 - y4`` to be positive integers.  For ``k <= 6``
this leaves ``l = 1`` and ``y1`` in {-3/2, -2, -5/2}.

Each right-hand edge is either of midpoint type (its midpoint is in the
half lattice, so its midpoint abscissa is a half-integer) or of lattice type
(its vector ``(a, rise)`` is integral and an interior point at height
``j / 2`` lies in the half lattice).  Walking the chain, every abscissa is
``+-x1 + const`` and every convexity and area condition is affine in ``x1``,
so each discrete skeleton yields an interval, a point, or nothing.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EdgeNotReducible, GeometryError
from .families import OCTAGON_FAMILIES, ParametricFamily
from .geometry import (
    AffineMap,
    CSPolygon,
    Lattice,
    Rat2,
    _xgcd,
    apply_affine,
    convex_hull,
    polygon_from_points,
    primitive_direction,
)
from .tiling import bolle_check, verify_kfold

F = Fraction


def reduce_long_edge(P: CSPolygon, edge_index: int, lattice: Lattice | None = None) -> CSPolygon:
    """Shorten the lattice edge ``edge_index = l * g`` (``g`` primitive, ``l >= 2``) to ``g``.

    The half-cycle after the edge moves by ``-(l-1)/2 * g`` and the other
    half by ``+(l-1)/2 * g``; the opposite edge shortens too, all other
    edges are translated, and the area drops by ``(l-1) |g x (v[i+m] - v[i])|``.
    """
    L = lattice or Lattice.integer()
    e = P.edge(edge_index)
    if not L.contains(e):
        raise EdgeNotReducible(f"edge {edge_index} = {e!r} is not a lattice vector")
    a, c = (int(t) for t in L.coords(e))
    ell = math.gcd(a, c)
    if ell < 2:
        raise EdgeNotReducible(f"edge {edge_index} = {e!r} is already primitive")
    g = e / ell
    h = g * F(ell - 1, 2)
    m, n = P.m, P.n
    i = edge_index % n
    moved = []
    for j in range(n):
        offset = (j - i - 1) % n  # 0 .. n-1, counting from v[i+1]
        moved.append(P.vertex(j) - h if offset < m else P.vertex(j) + h)
    return polygon_from_points(moved)


def stretch_edge(P: CSPolygon, edge_index: int, extra: int) -> CSPolygon:
    """Inverse of :func:`reduce_long_edge`: lengthen edge ``edge_index`` by ``extra`` copies of its direction."""
    e = P.edge(edge_index)
    p, q = primitive_direction(e)
    g = Rat2(p, q)
    h = g * F(extra, 2)
    m, n = P.m, P.n
    i = edge_index % n
    return polygon_from_points(
        [P.vertex(j) + h if (j - i - 1) % n < m else P.vertex(j) - h for j in range(n)]
    )


# --- normalised placements -------------------------------------------------


def window(y1: Fraction) -> tuple[Fraction, Fraction]:
    """Fundamental range ``[lo, hi)`` for ``x1`` under the shears fixing the bottom edge."""
    h = abs(y1)
    return F(-1, 2) - h / 2, F(-1, 2) + h / 2


@dataclass(frozen=True)
class Placement:
    y1: Fraction
    x1: Fraction
    vertices: tuple[Rat2, ...]  # counterclockwise from v1, with v2 = v1 + (1, 0)


def octagon_placements(P: CSPolygon) -> list[Placement]:
    """Every unimodular image of ``P`` with a primitive lattice edge as bottom edge ``(1, 0)``
    and ``x1`` in the fundamental window."""
    out = set()
    for R in (AffineMap.identity(), AffineMap(-1, 0, 0, 1)):
        Q = apply_affine(P, R)
        for i in range(Q.n):
            e = Q.edge(i)
            if not e.is_integral() or math.gcd(int(e.x), int(e.y)) != 1:
                continue
            p, q = int(e.x), int(e.y)
            _, s, t = _xgcd(p, q)
            if s * p + t * q != 1:
                s, t = -s, -t
            M = AffineMap(s, t, -q, p)
            vs = [M(Q.vertex(i + j)) for j in range(Q.n)]
            y1 = vs[0].y
            lo, _ = window(y1)
            shift = math.floor((vs[0].x - lo) / abs(y1))
            S = AffineMap(1, shift, 0, 1)  # x' = x + shift * y, and y1 < 0
            vs = tuple(S(v) for v in vs)
            out.add(Placement(y1, vs[0].x, vs))
    return sorted(out, key=lambda pl: (pl.y1, pl.x1, pl.vertices))


def family_parameter(fam: ParametricFamily, P: CSPolygon) -> Fraction | None:
    """A parameter ``s`` in the family's open interval with ``fam(s)`` unimodularly equal to ``P``."""
    n = len(fam.base)
    lo, hi = fam.interval
    target = None
    for pl in octagon_placements(P):
        for i in range(n):
            b, d = fam.base[i], fam.slope[i]
            b2, d2 = fam.base[(i + 1) % n], fam.slope[(i + 1) % n]
            if b.y != pl.y1 or d.y != 0 or d2 != d or b2 - b != Rat2(1, 0):
                continue
            step = abs(pl.y1)
            for j in range(-4, 5):
                x = pl.x1 + j * step
                if d.x == 0:
                    if b.x != x:
                        continue
                    s = (lo + hi) / 2
                else:
                    s = (x - b.x) / d.x
                if not lo < s < hi:
                    continue
                try:
                    Q = fam.raw(s)
                except GeometryError:
                    continue
                shifted = {AffineMap(1, -j, 0, 1)(v) for v in pl.vertices}
                if set(Q.vertices) == shifted:
                    return s
    return target


# --- the skeleton sweep ----------------------------------------------------


@dataclass(frozen=True)
class Skeleton:
    y1: Fraction
    rises: tuple[int, int, int]
    kinds: tuple[str, str, str]  # "M" midpoint type, "L" lattice-vector type
    values: tuple[Fraction, ...]  # midpoint abscissa (M) or edge x-component (L)

    def describe(self) -> dict:
        return {
            "y1": str(self.y1),
            "rises": list(self.rises),
            "edges": [f"{k}:{v}" for k, v in zip(self.kinds, self.values)],
        }


def _affine_chain(sk: Skeleton):
    """Abscissae of v1..v5 as ``(sign, const)`` pairs: ``x = sign * x1 + const``."""
    xs = [(1, F(0)), (1, F(1))]
    for kind, val in zip(sk.kinds, sk.values):
        s, c = xs[-1]
        if kind == "M":
            xs.append((-s, 2 * val - c))
        else:
            xs.append((s, c + val))
    return xs


def _ys(sk: Skeleton) -> list[Fraction]:
    ys = [sk.y1, sk.y1]
    for r in sk.rises:
        ys.append(ys[-1] + r)
    return ys


def _vertices(sk: Skeleton, x1: Fraction) -> list[Rat2]:
    xs = _affine_chain(sk)
    ys = _ys(sk)
    half = [Rat2(s * x1 + c, y) for (s, c), y in zip(xs[:4], ys[:4])]
    return half + [-v for v in half]


def _turns(vs: list[Rat2]) -> list[Fraction]:
    n = len(vs)
    return [(vs[i] - vs[i - 1]).cross(vs[(i + 1) % n] - vs[i]) for i in range(4)]


def _area(vs: list[Rat2]) -> Fraction:
    n = len(vs)
    return sum((vs[i].cross(vs[(i + 1) % n]) for i in range(n)), F(0)) / 2


def _affine_fn(fn, sk: Skeleton):
    """``fn`` applied to the vertex list, as exact affine functions of ``x1``."""
    at0 = fn(_vertices(sk, F(0)))
    at1 = fn(_vertices(sk, F(1)))
    if isinstance(at0, list):
        return [(a, b - a) for a, b in zip(at0, at1)]
    return at0, at1 - at0


def _solve(constraints, strict: bool):
    """Interval of ``x1`` with ``A + B x1 > 0`` (or ``>= 0``) for all ``(A, B)``.

    Returns ``(lo, hi, lo_closed, hi_closed)`` with ``None`` for infinite ends, or None if empty.
    """
    lo = hi = None
    lo_c = hi_c = not strict
    for A, B in constraints:
        if B == 0:
            if A < 0 or (strict and A == 0):
                return None
            continue
        root = -A / B
        if B > 0:
            if lo is None or root > lo:
                lo = root
        else:
            if hi is None or root < hi:
                hi = root
    if lo is not None and hi is not None:
        if lo > hi or (lo == hi and strict):
            return None
    return lo, hi, lo_c, hi_c


def _lattice_edge_ok(x_start: Fraction, a: Fraction, rise: int) -> bool:
    """Does the open edge from abscissa ``x_start`` with vector ``(a, rise)`` meet the half lattice off its midpoint?"""
    for j in range(1, 2 * rise):
        if j == rise:
            continue
        if (2 * (x_start + a * F(j, 2 * rise))).denominator == 1:
            return True
    return False


def _lattice_ok(sk: Skeleton, x1: Fraction) -> bool:
    xs = _affine_chain(sk)
    for idx, (kind, val, rise) in enumerate(zip(sk.kinds, sk.values, sk.rises)):
        if kind == "L":
            s, c = xs[idx + 1]
            if not _lattice_edge_ok(s * x1 + c, val, rise):
                return False
    return True


def _lattice_candidates(sk: Skeleton, lo: Fraction, hi: Fraction) -> list[Fraction]:
    """All ``x1`` in ``[lo, hi)`` satisfying the lattice-edge conditions.

    Each condition says ``s x1 + const`` lies in a coset of Z/2, so the
    admissible ``x1`` form finitely many progressions of step 1/2.
    """
    xs = _affine_chain(sk)
    cand = None
    for idx, (kind, val, rise) in enumerate(zip(sk.kinds, sk.values, sk.rises)):
        if kind != "L":
            continue
        s, c = xs[idx + 1]
        here = set()
        for j in range(1, 2 * rise):
            if j == rise:
                continue
            # s*x1 + c + val*j/(2 rise) = h/2
            off = c + val * F(j, 2 * rise)
            for h in range(math.floor(2 * (min(s * lo, s * hi) + off)) - 1, math.ceil(2 * (max(s * lo, s * hi) + off)) + 2):
                x = (F(h, 2) - off) * s
                if lo <= x < hi:
                    here.add(x)
        cand = here if cand is None else cand & here
    return sorted(cand or [])


@dataclass
class SkeletonOutcome:
    skeleton: Skeleton
    kind: str  # "family", "isolated", "degenerate", "rejected"
    interval: tuple | None = None
    x1: Fraction | None = None
    reason: str = ""
    area: Fraction | None = None


def _compositions(total: int, parts: int = 3):
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def skeleton_bounds(k: int) -> dict[Fraction, dict]:
    """Admissible bottom heights and the abscissa bound used for the candidate grid.

    A vertex at horizontal distance ``d`` beyond the central parallelogram
    adds at least ``2 |y1| d`` of area, so every vertex has
    ``|x| <= max|x1| + k / (2 |y1|)`` with ``x1`` in its window.
    """
    out = {}
    for twice in range(3, k):
        y1 = -F(twice, 2)
        if 2 * abs(y1) >= k:
            continue
        lo, hi = window(y1)
        xmax = max(abs(lo), abs(hi)) + F(k) / (2 * abs(y1))
        out[y1] = {"window": (lo, hi), "xmax": xmax,
                   "midpoints": [F(h, 2) for h in range(-math.floor(2 * xmax), math.floor(2 * xmax) + 1)],
                   "lattice_dx": list(range(-math.floor(2 * xmax), math.floor(2 * xmax) + 1))}
    return out


def iterate_skeletons(k: int):
    for y1, info in skeleton_bounds(k).items():
        for rises in _compositions(int(-2 * y1)):
            options = []
            for r in rises:
                opts = [("M", m) for m in info["midpoints"]]
                if r >= 2:
                    opts += [("L", F(a)) for a in info["lattice_dx"]]
                options.append(opts)
            for combo in itertools.product(*options):
                yield Skeleton(y1, rises, tuple(c[0] for c in combo), tuple(c[1] for c in combo))


def analyse_skeleton(sk: Skeleton, k: int) -> SkeletonOutcome | None:
    """Solve one skeleton; None means the closure condition already fails."""
    xs = _affine_chain(sk)
    s5, c5 = xs[4]
    lo_w, hi_w = window(sk.y1)
    turns = _affine_fn(_turns, sk)
    area = _affine_fn(_area, sk)
    if s5 == 1:
        # x5 = x1 + c5 must equal -x1
        points_ = [-c5 / 2]
        free = False
    else:
        if c5 != 0:
            return None
        free = True
        points_ = None
    has_lattice = "L" in sk.kinds

    def check_point(x1):
        if not lo_w <= x1 < hi_w:
            return SkeletonOutcome(sk, "rejected", x1=x1, reason="outside window")
        if not _lattice_ok(sk, x1):
            return SkeletonOutcome(sk, "rejected", x1=x1, reason="lattice edge misses the half lattice")
        vals = [A + B * x1 for A, B in turns]
        A_here = area[0] + area[1] * x1
        if min(vals) < 0:
            return SkeletonOutcome(sk, "rejected", x1=x1, reason="not convex", area=A_here)
        if min(vals) == 0:
            return SkeletonOutcome(sk, "degenerate", x1=x1, reason=_degeneracy(sk, x1), area=A_here)
        if A_here != k:
            return SkeletonOutcome(sk, "rejected", x1=x1, reason=f"area {A_here} != {k}", area=A_here)
        return SkeletonOutcome(sk, "isolated", x1=x1, area=A_here)

    if not free:
        return check_point(points_[0])
    A0, A1 = area
    if A1 != 0:
        return check_point((k - A0) / A1)
    strict = _solve(turns, True)
    if strict is None:
        closed = _solve(turns, False)
        if closed is None:
            return SkeletonOutcome(sk, "rejected", reason="not convex for any x1")
        lo, hi = closed[0], closed[1]
        if lo is not None and lo == hi and lo_w <= lo < hi_w:
            return SkeletonOutcome(sk, "degenerate", x1=lo, reason=_degeneracy(sk, lo), area=A0)
        return SkeletonOutcome(sk, "rejected", reason="convexity holds only degenerately", area=A0)
    lo, hi = strict[0], strict[1]
    if not ((lo is None or lo < hi_w) and (hi is None or hi > lo_w)):
        return SkeletonOutcome(sk, "rejected", interval=(lo, hi), reason="interval outside window", area=A0)
    if A0 != k:
        return SkeletonOutcome(sk, "rejected", interval=(lo, hi), reason=f"area {A0} != {k}", area=A0)
    if not has_lattice:
        return SkeletonOutcome(sk, "family", interval=(lo, hi), area=A0)
    # lattice edges pin x1 to finitely many values
    a = max(lo_w, lo) if lo is not None else lo_w
    b = min(hi_w, hi) if hi is not None else hi_w
    pts = [x for x in _lattice_candidates(sk, a, b) if (lo is None or x > lo) and (hi is None or x < hi)]
    if not pts:
        return SkeletonOutcome(sk, "rejected", interval=(lo, hi), reason="lattice edge misses the half lattice", area=A0)
    return SkeletonOutcome(sk, "isolated", x1=pts[0], area=A0, reason=f"{len(pts)} admissible points")


def _degeneracy(sk: Skeleton, x1: Fraction) -> str:
    hull = convex_hull(_vertices(sk, x1))
    names = {4: "parallelogram", 6: "hexagon"}
    return f"degenerates to a {names.get(len(hull), f'{len(hull)}-gon')}"


def _skeleton_family(sk: Skeleton, interval, k: int, name: str) -> ParametricFamily:
    xs = _affine_chain(sk)
    ys = _ys(sk)
    base = tuple(Rat2(c, y) for (s, c), y in zip(xs[:4], ys[:4]))
    slope = tuple(Rat2(s, 0) for (s, c) in xs[:4])
    return ParametricFamily(name, "x1", base, slope, interval, k, Lattice.integer())


@dataclass
class OctagonFamilyResult:
    family: ParametricFamily  # in the matched family's parameter when a match exists
    raw: ParametricFamily  # in the sweep coordinate x1
    skeletons: list[Skeleton]
    matched: str | None
    interval: tuple[Fraction, Fraction]

    def to_json(self) -> dict:
        lo, hi = self.interval
        return {
            "name": self.family.name,
            "parameter": self.family.symbol,
            "interval": [str(lo), str(hi)],
            "k": self.family.k,
            "half_cycle": [[f"{b.x} + ({d.x})*{self.family.symbol}", str(b.y)] for b, d in zip(self.family.base, self.family.slope)],
            "skeletons": [sk.describe() for sk in self.skeletons],
            "matched": self.matched,
        }


@dataclass
class OctagonSweep:
    k: int
    families: list[OctagonFamilyResult]
    isolated: list[SkeletonOutcome]
    degenerate: list[SkeletonOutcome]
    audit: list[dict]
    bounds: dict
    counts: dict = field(default_factory=dict)
    seconds: float = 0.0

    def summary(self) -> str:
        parts = []
        for fr in self.families:
            lo, hi = fr.interval
            parts.append(f"{fr.family.symbol} in ({lo}, {hi})")
        n = len(self.families)
        head = f"{n} parametric famil{'y' if n == 1 else 'ies'}"
        return head + (": " + "; ".join(parts) if parts else "")


def _same_family(f1: ParametricFamily, f2: ParametricFamily) -> bool:
    for t in f1.sample(3):
        if family_parameter(f2, f1.raw(t)) is None:
            return False
    return True


def _match_known(raw: ParametricFamily, k: int):
    for key, known in OCTAGON_FAMILIES.items():
        if known.k != k or key == "six_fold_as_printed":
            continue
        ts = raw.sample(3)
        ss = [family_parameter(known, raw.raw(t)) for t in ts]
        if any(s is None for s in ss):
            continue
        slope = (ss[1] - ss[0]) / (ts[1] - ts[0])
        offset = ss[0] - slope * ts[0]
        if ss[2] != offset + slope * ts[2]:
            continue
        lo, hi = raw.interval
        ends = sorted([offset + slope * lo, offset + slope * hi])
        # re-express the derived vertex functions in the matched parameter
        inv = 1 / slope
        base = tuple(b + d * (-offset * inv) for b, d in zip(raw.base, raw.slope))
        dirs = tuple(d * inv for d in raw.slope)
        fam = ParametricFamily(known.name, known.symbol, base, dirs, (ends[0], ends[1]), k, Lattice.integer())
        return key, fam
    return None, None


def enumerate_octagons(k_filter: int, sample_budget: int | None = 200, seed: int = 0) -> OctagonSweep:
    t0 = time.perf_counter()
    bounds = skeleton_bounds(k_filter)
    counts = {"skeletons": 0, "closure_failed": 0, "rejected": 0, "degenerate": 0, "isolated": 0, "family_skeletons": 0}
    audit = []
    fams: list[tuple[ParametricFamily, list[Skeleton]]] = []
    isolated, degenerate = [], []
    for sk in iterate_skeletons(k_filter):
        counts["skeletons"] += 1
        out = analyse_skeleton(sk, k_filter)
        if out is None:
            counts["closure_failed"] += 1
            continue
        rec = {"candidate": sk.describe(), "stage_rejected": out.kind if out.kind != "family" else None,
               "reason": out.reason or out.kind,
               "numbers": {"x1": None if out.x1 is None else str(out.x1),
                           "area": None if out.area is None else str(out.area)}}
        if out.kind == "rejected":
            counts["rejected"] += 1
            if out.reason not in ("outside window", "not convex", "not convex for any x1"):
                audit.append(rec)
            continue
        audit.append(rec)
        if out.kind == "degenerate":
            counts["degenerate"] += 1
            degenerate.append(out)
            continue
        if out.kind == "isolated":
            counts["isolated"] += 1
            isolated.append(out)
            continue
        counts["family_skeletons"] += 1
        raw = _skeleton_family(sk, out.interval, k_filter, f"octagon-{len(fams)}")
        for fam, sks in fams:
            if _same_family(raw, fam):
                sks.append(sk)
                break
        else:
            fams.append((raw, [sk]))
    results = []
    for raw, sks in fams:
        key, fam = _match_known(raw, k_filter)
        if fam is None:
            fam, interval = raw, raw.interval
        else:
            interval = fam.interval
        if sample_budget is not None:
            for t in fam.sample(3):
                verify_kfold(fam.instantiate(t), Lattice.integer(), k_filter, sample_budget, seed)
        results.append(OctagonFamilyResult(fam, raw, sks, key, interval))
    results.sort(key=lambda r: (r.interval, r.family.name))
    return OctagonSweep(k_filter, results, isolated, degenerate, audit,
                        {str(y): {"window": [str(v) for v in b["window"]], "xmax": str(b["xmax"])} for y, b in bounds.items()},
                        counts, time.perf_counter() - t0)


def lower_bound_readings(fam: ParametricFamily, t) -> dict:
    """Evaluate both readings of the lower bound ``4 x + 2`` at the midpoint abscissae of G2 and G3."""
    P = fam.instantiate(t)
    vs = list(fam.half_cycle(t)) + [-v for v in fam.half_cycle(t)]
    u2 = (vs[1] + vs[2]) / 2
    u3 = (vs[2] + vs[3]) / 2
    return {
        "x2_mid": u2.x,
        "x3_mid": u3.x,
        "reading_x2": 4 * 2 * u2.x - 2 * (2 * u2.x - 1),
        "reading_x3": 4 * u3.x + 2,
        "area": P.area,
    }


def printed_vs_corrected(alpha) -> list[tuple[str, str, Fraction, Fraction]]:
    """Coordinate-wise differences between the published octagon and the certified one.

    The certified vertices are listed under the published labels, matched by nearest
    vertex; returns ``(label, coordinate, published, certified)`` for each mismatch.
    """
    printed = OCTAGON_FAMILIES["six_fold_as_printed"].half_cycle(alpha)
    corrected = OCTAGON_FAMILIES["six_fold_corrected"].half_cycle(alpha)
    pool = corrected + [-v for v in corrected]
    diffs = []
    for i, v in enumerate(printed):
        w = min(pool, key=lambda q: (abs(q.x - v.x) + abs(q.y - v.y), q))
        for name in ("x", "y"):
            a, b = getattr(v, name), getattr(w, name)
            if a != b:
                diffs.append((f"v{i + 1}", name, a, b))
    return diffs
