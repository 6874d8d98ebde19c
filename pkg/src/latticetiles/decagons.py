"""Exhaustive search for decagon lattice tiles whose edge midpoints all lie in the half lattice.

After an affine change of coordinates the lattice is Z^2 and the doubled
midpoints ``u'_i = 2 u_i`` form a centrally symmetric convex lattice decagon
``Q10`` whose area is at most ``4k - 1``.  The sweep lists every such
decagon having a vertex ``(0, g)``, normalises the shear fixing that
vertex, and keeps the ones whose midpoint data produce a convex decagon of
area ``k``.  Case labels of the form ``2.1.x`` are recomputed afterwards
from a second normalisation, purely for reporting.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .families import FAMILY_MIDPOINTS, MidpointSpec, decagon_from_midpoints, freedom_region
from .geometry import (
    AffineMap,
    CSPolygon,
    Lattice,
    Rat2,
    _xgcd,
    apply_affine,
    canonical_form,
    is_strictly_convex_ccw,
    points,
    polygon_from_points,
    pt,
)
from .tiling import verify_kfold

F = Fraction

# tuple lists and area claims printed for the primitive-vertex subcases
PUBLISHED_TUPLES = {
    "2.1.2": [(1, 1, 3, 1), (1, 1, 4, 1), (1, 1, 5, 1), (1, 1, 6, 1), (1, 1, 7, 1),
              (1, 1, 5, 2), (1, 1, 6, 2), (1, 1, 7, 2), (1, 1, 7, 3)],
    "2.1.3": [(1, 1, 4, 1), (1, 1, 5, 1), (1, 1, 6, 1), (2, 1, 4, 1), (2, 1, 5, 1), (2, 1, 6, 1)],
    "2.1.4": [(1, 1, 5, 1), (2, 1, 5, 1), (3, 1, 5, 1)],
    "2.1.8": [(1, 1, 4, 2), (1, 1, 5, 3), (2, 2, 5, 3), (1, 1, 6, 3)],
    "2.1.9": [(1, 1, 5, 2)],
    "2.1.10": [],
    "2.1.13": [(2, 2, 3, 2)],
}

# the two coordinate changes printed alongside the six-fold winners
PRINTED_MAPS = {
    "2.1.2": (AffineMap(F(1, 2), -1, 0, F(1, 2)), "A"),
    "2.1.8": (AffineMap(0, F(1, 2), F(1, 2), -1), "B"),
}

WINNERS = {
    "2.1.2-six": tuple(points([(0, 1), (5, 2), (7, 2), (6, 1), (4, 0)])),
    "2.1.8-six": tuple(points([(0, 1), (5, 3), (8, 4), (7, 3), (4, 1)])),
    "2.1.2-five": tuple(points([(0, 1), (4, 2), (6, 2), (5, 1), (3, 0)])),
}


def subcase_label(dx: int, dy: int) -> str | None:
    """Published case label for ``u'_3 - u'_2 = (dx, dy)``, or None if not listed."""
    table = {0: (1, 5), 1: (1, 6), 2: (3, 7), 3: (4, 8), 4: (5, 8), 5: (6, 8), 6: (7, 8), 7: (8, 8)}
    if dy not in table or dx < 1:
        return None
    first_dx, open_dx = table[dy]
    if dx < first_dx:
        return None
    offset = {0: 0, 1: 5, 2: 11, 3: 16, 4: 21, 5: 25, 6: 28, 7: 30}[dy]
    return f"2.1.{offset + min(dx, open_dx) - first_dx + 1}"


def tuple_decagon(dx: int, dy: int, p1: int, q1: int, p2: int, q2: int) -> list[Rat2]:
    """Half-cycle ``u'_1..u'_5`` (clockwise) for ``u'_1 = (0, 1)``."""
    return points([
        (0, 1),
        (p1 + p2, q1 + q2),
        (p1 + p2 + dx, q1 + q2 + dy),
        (p2 + dx, q2 + dy),
        (p2, q2 - 1),
    ])


def slopes(dx, dy, p1, q1, p2, q2) -> tuple[Fraction, ...]:
    return (F(q1 + q2 - 1, p1 + p2), F(dy, dx), F(q1, p1), F(dy + 1, dx), F(q2, p2))


def subcase_tuples(dx: int, dy: int, bound_x3: int = 10) -> list[tuple[int, int, int, int]]:
    """All positive ``(p1, q1, p2, q2)`` with ``b2 < b1 < b5 < b4 < b3`` and ``x'_3 <= bound_x3``.

    ``b_i`` are the slopes of the five consecutive edges of ``Q10``
    (clockwise from ``u'_1 = (0, 1)``); the chain is exactly strict convexity.
    """
    out = []
    if dx < 1:
        return out
    b2, b4 = F(dy, dx), F(dy + 1, dx)
    for p1 in range(1, bound_x3 - dx):
        for p2 in range(1, bound_x3 - dx - p1 + 1):
            # q2/p2 < b4 and q1 + q2 - 1 < b5 (p1 + p2) bound the search
            for q2 in range(1, math.ceil(b4 * p2) + 1):
                b5 = F(q2, p2)
                if not b5 < b4:
                    continue
                q1_max = math.ceil(b5 * (p1 + p2)) + 1
                for q1 in range(1, q1_max + 1):
                    b1, _, b3, _, _ = slopes(dx, dy, p1, q1, p2, q2)
                    if b2 < b1 < b5 < b4 < b3:
                        out.append((p1, q1, p2, q2))
    return sorted(out)


def q10_area(half: Iterable[Rat2]) -> Fraction:
    Q = polygon_from_points(list(half) + [-v for v in half])
    return Q.area


@dataclass(frozen=True)
class CaseFrame:
    """A placement of ``Q10`` in the coordinates of the published case analysis."""

    half: tuple[Rat2, ...]  # u'_1..u'_5, clockwise, u'_1 = (0, 1)
    dx: int
    dy: int
    tuple4: tuple[int, int, int, int]
    betas: tuple[Fraction, ...]
    label: str | None


def case_frames(Q: CSPolygon) -> list[CaseFrame]:
    """All placements with a primitive vertex at (0, 1), edge slope b1 in [0, 1)
    and ``u'_3`` strictly rightmost."""
    frames = set()
    for w in Q.vertices[: Q.m]:
        a, b = int(w.x), int(w.y)
        if math.gcd(a, b) != 1:
            continue
        g, s, t = _xgcd(a, b)
        if g < 0:
            s, t = -s, -t
        M = AffineMap(b, -a, s, t)
        for R in (AffineMap.identity(), AffineMap(-1, 0, 0, 1)):
            img = [(R @ M)(v) for v in Q.vertices]
            top = img.index(Rat2(0, 1))
            n = len(img)
            # clockwise neighbour of (0, 1) has x > 0
            cw = [img[(top - j) % n] for j in range(n)]
            if cw[1].x <= 0:
                cw = [img[(top + j) % n] for j in range(n)]
            u2 = cw[1]
            shift = -((u2.y - 1) // u2.x)
            Sh = AffineMap(1, 0, shift, 1)
            half = [Sh(v) for v in cw[:5]]
            xs = [v.x for v in half]
            if not (xs[2] > max(xs[:2] + xs[3:])):
                continue
            dx, dy = int(half[2].x - half[1].x), int(half[2].y - half[1].y)
            p1, q1 = int(half[2].x - half[3].x), int(half[2].y - half[3].y)
            p2, q2 = int(half[4].x), int(half[4].y + 1)
            tup = (p1, q1, p2, q2)
            frames.add(CaseFrame(tuple(half), dx, dy, tup, slopes(dx, dy, *tup) if min(tup) > 0 and dx > 0 else (), subcase_label(dx, dy)))
    return sorted(frames, key=lambda f: (f.dx, f.dy, f.tuple4))


def frame_alpha_range(frame: CaseFrame) -> tuple[Fraction, Fraction]:
    """Closed hull of the slopes of the tile edge through ``u_1 = (0, 1/2)`` over the freedom region.

    The free vertex ``w`` is the far end of that edge, so the slope is
    ``(w_y - 1/2) / w_x``; a linear-fractional function on a convex region
    takes its extremes at the region's vertices.
    """
    spec = MidpointSpec(tuple(v / 2 for v in frame.half))
    region = freedom_region(spec, 0)
    if region.empty:
        raise ValueError("frame has an empty freedom region")
    xs = [w.x for w in region.vertices]
    if min(xs) <= 0 <= max(xs):
        raise ValueError("edge through u_1 can be vertical in this frame")
    vals = [(w.y - F(1, 2)) / w.x for w in region.vertices]
    return min(vals), max(vals)


@dataclass
class Q10Candidate:
    half: tuple[Rat2, ...]  # counterclockwise half cycle starting at (0, -g)
    g: int
    area: Fraction
    polygon: CSPolygon

    @property
    def spec(self) -> MidpointSpec:
        return MidpointSpec(tuple(v / 2 for v in self.half))


@dataclass
class Q10Class:
    canonical: CSPolygon
    representative: Q10Candidate
    branch: str
    k: int
    tile: CSPolygon
    region_vertices: tuple[Rat2, ...]
    frames: list[CaseFrame]
    families: list[str]
    hits: int = 1
    certified: bool = False

    def to_json(self) -> dict:
        return {
            "q10_half_cycle": [v.to_strings() for v in self.representative.half],
            "q10_area": str(self.representative.area),
            "canonical": [v.to_strings() for v in self.canonical.vertices],
            "branch": self.branch,
            "k": self.k,
            "tile": [v.to_strings() for v in self.tile.vertices],
            "freedom_region": [v.to_strings() for v in self.region_vertices],
            "published_labels": sorted({f.label for f in self.frames if f.label}),
            "tuples": sorted({(f.label, f.tuple4) for f in self.frames if f.label}, key=str),
            "matches": self.families,
            "g1_slope_ranges": {f"{f.label} {f.tuple4}": [str(v) for v in frame_alpha_range(f)] for f in self.frames},
            "certified": self.certified,
        }


@dataclass
class DecagonSweep:
    k: int
    classes: list[Q10Class]
    audit: list[dict]
    counts: dict = field(default_factory=dict)
    seconds: float = 0.0

    def summary(self) -> str:
        n = len(self.classes)
        return f"{n} class" + ("" if n == 1 else "es")

    @property
    def horizontal_g1_possible(self) -> bool:
        """Whether some accepted tile, in some case frame, has a horizontal edge through ``u_1``."""
        for cls in self.classes:
            for f in cls.frames:
                lo, hi = frame_alpha_range(f)
                if math.floor(lo) + 1 < hi:  # the region is open, so the slope range is too
                    return True
        return False


def _branch(Q: CSPolygon) -> str:
    gs = [math.gcd(int(v.x), int(v.y)) for v in Q.vertices]
    if min(gs) == 1:
        return "primitive"
    return "odd" if min(gs) % 2 else "even"


def _family_canonicals() -> dict[str, tuple]:
    out = {}
    for name, spec in FAMILY_MIDPOINTS.items():
        Q = polygon_from_points(spec.doubled() + [-v for v in spec.doubled()])
        out[name] = canonical_form(Q).key()
    return out


def sweep_q10(k: int, audit_limit: int | None = None):
    """Yield ``(candidate, verdict, detail)`` for every normalised convex ``Q10``.

    Every strictly convex centrally symmetric lattice decagon of area at most
    ``4k - 1`` is produced at least once: it has a vertex ``(0, g)`` after a
    unimodular map, ``g <= (4k - 1) / 2`` because the decagon contains a
    quadrilateral of area ``2 g x`` for each vertex abscissa ``x``, and the
    edge ``c4 -> (0, g)`` can be sheared to slope ``[0, 1)``.
    """
    amax = 4 * k - 1
    for g in range(1, amax // 2 + 1):
        X = amax // (2 * g)
        c0, c5 = Rat2(0, -g), Rat2(0, g)
        for x4 in range(1, X + 1):
            for t in range(x4):
                c4 = Rat2(x4, g + t)
                s = F(t, x4)
                strip = [Rat2(x, y) for x in range(1, X + 1)
                         for y in range(math.floor(s * x - g) + 1, math.ceil(s * x + g))]
                strip_set = set(strip)
                for c1 in strip:
                    # turns at (0, -g) and (0, g) involve only c1 and c4
                    if (c0 - (-c4)).cross(c1 - c0) <= 0 or (c5 - c4).cross(-c1 - c5) <= 0:
                        continue
                    for c2 in strip:
                        c3 = c4 - c1 + c2 - c5
                        if c3 not in strip_set:
                            continue
                        half = [c0, c1, c2, c3, c4]
                        full = half + [-v for v in half]
                        if not is_strictly_convex_ccw(full):
                            continue
                        Q = CSPolygon(tuple(full))
                        A = Q.area
                        cand = Q10Candidate(tuple(half), g, A, Q)
                        if A > amax:
                            yield cand, "area", f"area(Q10) = {A} > {amax}"
                            continue
                        yield cand, "ok", ""


def enumerate_q10(k_filter: int, sample_budget: int = 200, seed: int = 0) -> DecagonSweep:
    if k_filter < 1:
        raise ValueError("k_filter must be positive")
    t0 = time.perf_counter()
    classes: dict[tuple, Q10Class] = {}
    audit = []
    counts = {"convex_q10": 0, "area_rejected": 0, "region_empty": 0, "wrong_k": 0, "accepted": 0,
              "slope_zero_accepted": 0, "slope_zero_rejected": 0}
    fam_keys = _family_canonicals()
    for cand, verdict, detail in sweep_q10(k_filter):
        counts["convex_q10"] += 1
        slope_zero = cand.half[4].y == cand.g  # edge c4 -> (0, g) horizontal
        record = {"candidate": [v.to_strings() for v in cand.half], "g": cand.g, "numbers": {"q10_area": str(cand.area)}}
        if verdict == "area":
            counts["area_rejected"] += 1
            continue  # summarised by count only; these are the bulk
        spec = cand.spec
        region = freedom_region(spec, 0)
        if region.empty:
            counts["region_empty"] += 1
            counts["slope_zero_rejected"] += slope_zero
            audit.append({**record, "stage_rejected": "freedom_region", "reason": "no convex decagon has these midpoints"})
            continue
        tile = decagon_from_midpoints(spec, region.interior_point(), 0)
        if tile.area != k_filter:
            counts["wrong_k"] += 1
            counts["slope_zero_rejected"] += slope_zero
            audit.append({**record, "stage_rejected": "multiplicity",
                          "reason": f"area(P) = {tile.area} != {k_filter}", "numbers": {**record["numbers"], "tile_area": str(tile.area)}})
            continue
        counts["accepted"] += 1
        counts["slope_zero_accepted"] += slope_zero
        key = canonical_form(cand.polygon).key()
        if key in classes:
            classes[key].hits += 1
            continue
        frames = case_frames(cand.polygon)
        matches = sorted(name for name, fk in fam_keys.items() if fk == key)
        cls = Q10Class(canonical_form(cand.polygon), cand, _branch(cand.polygon), k_filter, tile,
                       region.vertices, frames, matches)
        if sample_budget is not None:
            verify_kfold(tile, Lattice.integer(), k_filter, sample_budget, seed)
            cls.certified = True
        classes[key] = cls
    ordered = [classes[key] for key in sorted(classes)]
    for cls in ordered:
        audit.append({"candidate": [v.to_strings() for v in cls.representative.half], "g": cls.representative.g,
                      "stage_rejected": None, "reason": "accepted", "numbers": {"q10_area": str(cls.representative.area),
                                                                              "tile_area": str(cls.tile.area), "hits": cls.hits}})
    return DecagonSweep(k_filter, ordered, audit, counts, time.perf_counter() - t0)


@dataclass(frozen=True)
class TupleRow:
    label: str
    dx: int
    dy: int
    tuple4: tuple[int, int, int, int]
    q10_area: Fraction
    published: bool


def subcase_table(bound_x3: int = 10, k: int = 6) -> list[TupleRow]:
    """Solutions of every published primitive-vertex subcase with their decagon areas."""
    rows = []
    for dy in range(0, 8):
        for dx in range(1, bound_x3):
            label = subcase_label(dx, dy)
            if label is None:
                continue
            published = set(PUBLISHED_TUPLES.get(label, []))
            for tup in subcase_tuples(dx, dy, bound_x3):
                rows.append(TupleRow(label, dx, dy, tup, q10_area(tuple_decagon(dx, dy, *tup)), tup in published))
    return rows


def compare_published(bound_x3: int = 10) -> dict[str, dict]:
    """Published tuple lists against the exhaustive solver, per subcase."""
    out = {}
    for label, listed in PUBLISHED_TUPLES.items():
        dx, dy = _label_to_delta(label)
        solved = subcase_tuples(dx, dy, bound_x3)
        out[label] = {
            "published": sorted(listed),
            "solved": solved,
            "missing_from_published": sorted(set(solved) - set(listed)),
            "not_solutions": sorted(set(listed) - set(solved)),
            "areas": {str(t): str(q10_area(tuple_decagon(dx, dy, *t))) for t in sorted(set(solved) | set(listed))},
        }
    return out


def _label_to_delta(label: str) -> tuple[int, int]:
    for dy in range(8):
        for dx in range(1, 12):
            if subcase_label(dx, dy) == label:
                return dx, dy
    raise KeyError(label)


def printed_map_check() -> dict[str, bool]:
    """Whether each printed map sends its winner onto the stated family midpoints."""
    out = {}
    for label, (T, fam) in PRINTED_MAPS.items():
        half = WINNERS[f"{label}-six"]
        Q = polygon_from_points(list(half) + [-v for v in half])
        target = FAMILY_MIDPOINTS[fam]
        out[label] = set(apply_affine(Q, T).vertices) == set(target.full)
    return out


def write_audit(records: list[dict], path) -> None:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
