"""Multiple lattice tilings: edge-criterion certification and counting oracles.

A centrally symmetric convex polygon ``P`` tiles the plane ``k``-fold with
translates ``P + L`` exactly when every edge contains a point of the half
lattice ``L/2`` in its relative interior, and every edge whose midpoint misses
``L/2`` is itself a lattice vector.  :func:`bolle_check` decides this exactly;
:func:`covering_multiplicity_at` counts translates directly and serves as the
independent oracle.
"""
from __future__ import annotations

import logging
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    BolleFailed,
    MultiplicityMismatch,
    NonIntegerMultiplicity,
    NotCentered,
    NotCertified,
    RankDeficientGenerators,
)
from .geometry import (
    CSPolygon,
    Lattice,
    Location,
    Rat2,
    locate_in_convex,
    points,
    polygon_from_points,
    signed_area,
    to_lattice_frame,
)

log = logging.getLogger(__name__)

SAMPLE_DENOMINATOR = 2**31


@dataclass(frozen=True)
class EdgeEvidence:
    """Why edge ``edge`` satisfies (or violates) the edge criterion.

    ``kind`` is ``"midpoint"`` when the midpoint lies in the half lattice,
    ``"lattice_vector"`` when the edge vector is in the lattice and ``witness``
    is a half-lattice point strictly inside the edge, and ``"failed"`` otherwise.
    """

    edge: int
    kind: str
    midpoint: Rat2
    witness: Rat2 | None = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.kind != "failed"


@dataclass(frozen=True)
class BolleReport:
    polygon: CSPolygon
    lattice: Lattice
    evidence: tuple[EdgeEvidence, ...]
    area: Fraction
    det: Fraction

    @property
    def passed(self) -> bool:
        return all(ev.ok for ev in self.evidence)

    @property
    def failures(self) -> list[EdgeEvidence]:
        return [ev for ev in self.evidence if not ev.ok]

    @property
    def ratio(self) -> Fraction:
        return self.area / self.det

    @property
    def k(self) -> int | None:
        """Multiplicity, when the criterion holds."""
        if not self.passed:
            return None
        return int(self.ratio)

    def __bool__(self):
        return self.passed


@dataclass(frozen=True)
class OracleSummary:
    points_tested: int
    rejected: int
    multiplicities: dict[int, int]
    seed: int

    @property
    def uniform(self) -> bool:
        return len(self.multiplicities) == 1


@dataclass(frozen=True)
class TilingCertificate:
    polygon: CSPolygon
    lattice: Lattice
    k: int
    evidence: tuple[EdgeEvidence, ...]
    oracle: OracleSummary | None = None


def _as_centered_polygon(P) -> CSPolygon:
    if isinstance(P, CSPolygon):
        return P
    pts = points(P)
    n = len(pts)
    cx = sum((p.x for p in pts), Fraction(0)) / n
    cy = sum((p.y for p in pts), Fraction(0)) / n
    if cx != 0 or cy != 0:
        raise NotCentered(f"polygon centroid is ({cx}, {cy}), not the origin")
    return polygon_from_points(pts)


def half_lattice_points_inside(L: Lattice, start: Rat2, vec: Rat2) -> list[Fraction]:
    """Parameters ``0 < t < 1`` with ``start + t*vec`` in ``L/2``, ascending.

    Solves the one-parameter congruence in lattice coordinates by running
    through the finitely many integer crossings of one coordinate.
    """
    a = [2 * c for c in L.coords(start)]
    d = [2 * c for c in L.coords(vec)]
    axis = 0 if d[0] != 0 else 1
    other = 1 - axis
    if d[axis] == 0:
        return []
    if d[other] == 0 and a[other].denominator != 1:
        return []
    lo, hi = sorted((a[axis], a[axis] + d[axis]))
    found = []
    n = math.floor(lo) + 1
    while n < hi:
        t = (n - a[axis]) / d[axis]
        if (a[other] + t * d[other]).denominator == 1:
            found.append(t)
        n += 1
    return sorted(found)


def bolle_check(P, L: Lattice) -> BolleReport:
    """Check the edge criterion for ``P + L``; never raises on plain failure.

    On success ``report.k == area / det``, asserted integral.
    """
    P = _as_centered_polygon(P)
    evidence = []
    for i in range(P.n):
        v, e, u = P.vertex(i), P.edge(i), P.midpoint(i)
        if L.contains(u, half=True):
            evidence.append(EdgeEvidence(i, "midpoint", u, u))
            continue
        if not L.contains(e):
            evidence.append(EdgeEvidence(i, "failed", u, None, "midpoint not in L/2 and edge is not a lattice vector"))
            continue
        ts = half_lattice_points_inside(L, v, e)
        if not ts:
            evidence.append(EdgeEvidence(i, "failed", u, None, "edge is a lattice vector but its relative interior misses L/2"))
            continue
        evidence.append(EdgeEvidence(i, "lattice_vector", u, v + e * ts[0]))
    report = BolleReport(P, L, tuple(evidence), P.area, L.det)
    if report.passed and report.ratio.denominator != 1:
        raise NonIntegerMultiplicity(f"edge conditions hold but area/det = {report.ratio}")
    return report


class TranslateCounter:
    """Exact counting of lattice translates of ``P`` covering a point.

    Works in lattice coordinates (the lattice becomes Z^2) with integer
    arithmetic; for each column of candidate translates the admissible rows
    are obtained by exact floor division, so the cost is O(width * edges).
    """

    def __init__(self, P: CSPolygon, L: Lattice):
        self.polygon = P
        self.lattice = L
        self.frame = to_lattice_frame(L)
        verts = [self.frame(v) for v in P.vertices]
        if signed_area(verts) < 0:
            verts.reverse()
        self.local = verts
        n = len(verts)
        self.halfplanes = []
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            A = -(b.y - a.y)
            B = b.x - a.x
            C = (b.y - a.y) * a.x - (b.x - a.x) * a.y
            s = math.lcm(A.denominator, B.denominator, C.denominator)
            self.halfplanes.append((int(A * s), int(B * s), int(C * s)))
        xs = [v.x for v in verts]
        ys = [v.y for v in verts]
        self.xmin, self.xmax = min(xs), max(xs)
        self.ymin, self.ymax = min(ys), max(ys)

    def _scan(self, q: Rat2, want_boundary: bool):
        # q is in lattice coordinates; translate t=(i, j) covers q iff q - t in P
        D = math.lcm(q.x.denominator, q.y.denominator)
        X, Y = int(q.x * D), int(q.y * D)
        base = [(A, B, A * X + B * Y + C * D) for A, B, C in self.halfplanes]
        interior = boundary = 0
        touching = []
        for i in range(math.ceil(q.x - self.xmax), math.floor(q.x - self.xmin) + 1):
            lo_c = lo_o = math.ceil(q.y - self.ymax) - 1
            hi_c = hi_o = math.floor(q.y - self.ymin) + 1
            empty = False
            for A, B, S in base:
                r = S - D * A * i  # need r - D*B*j >= 0 (closed) / > 0 (open)
                if B == 0:
                    if r < 0:
                        empty = True
                        break
                    if r == 0:
                        hi_o = lo_o - 1
                    continue
                den = D * B
                if B > 0:
                    # j <= r / den
                    hi_c = min(hi_c, r // den)
                    hi_o = min(hi_o, -((-r) // den) - 1)
                else:
                    # j >= r / den  (den < 0)
                    lo_c = max(lo_c, _ceil_div(r, den))
                    lo_o = max(lo_o, r // den + 1)
            if empty or hi_c < lo_c:
                continue
            n_open = max(0, hi_o - lo_o + 1) if hi_o >= lo_o else 0
            n_closed = hi_c - lo_c + 1
            interior += n_open
            boundary += n_closed - n_open
            if want_boundary and n_closed > n_open:
                for j in range(lo_c, hi_c + 1):
                    if not (lo_o <= j <= hi_o):
                        touching.append((i, j))
        return interior, boundary, touching

    def count(self, p: Rat2) -> tuple[int, int]:
        interior, boundary, _ = self._scan(self.frame(p), False)
        return interior, boundary

    def count_local(self, q: Rat2) -> tuple[int, int]:
        interior, boundary, _ = self._scan(q, False)
        return interior, boundary

    def boundary_translates(self, p: Rat2) -> tuple[int, list[tuple[Rat2, Location]]]:
        """Interior count and the translates whose boundary passes through ``p``."""
        interior, _, touching = self._scan(self.frame(p), True)
        out = []
        for i, j in touching:
            t = self.lattice.point(i, j)
            out.append((t, locate_in_convex(self.polygon.vertices, p - t)))
        return interior, out


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def covering_multiplicity_at(P: CSPolygon, L: Lattice, p: Rat2) -> tuple[int, int]:
    """``(interior_count, boundary_count)`` of translates ``P + t``, ``t`` in ``L``, at ``p``."""
    return TranslateCounter(P, L).count(p)


def brute_force_multiplicity(P: CSPolygon, L: Lattice, p: Rat2) -> tuple[int, int]:
    """Slow reference count: classify ``p - t`` for every lattice point ``t`` in range."""
    frame = to_lattice_frame(L)
    local = [frame(v) for v in P.vertices]
    q = frame(p)
    xs = [v.x for v in local]
    ys = [v.y for v in local]
    interior = boundary = 0
    for i in range(math.floor(q.x - max(xs)) - 1, math.ceil(q.x - min(xs)) + 2):
        for j in range(math.floor(q.y - max(ys)) - 1, math.ceil(q.y - min(ys)) + 2):
            kind = locate_in_convex(P.vertices, p - L.point(i, j)).kind
            if kind == "interior":
                interior += 1
            elif kind != "exterior":
                boundary += 1
    return interior, boundary


def generic_samples(counter: TranslateCounter, budget: int, seed: int = 0):
    """Yield ``(point, interior_count)`` for ``budget`` generic points of a fundamental cell.

    Coordinates are random numerators over 2**31 in lattice coordinates;
    points on any translate's boundary are discarded and redrawn.
    """
    rng = random.Random(seed)
    L = counter.lattice
    produced = rejected = 0
    while produced < budget:
        q = Rat2(Fraction(rng.randrange(SAMPLE_DENOMINATOR), SAMPLE_DENOMINATOR),
                 Fraction(rng.randrange(SAMPLE_DENOMINATOR), SAMPLE_DENOMINATOR))
        interior, boundary = counter.count_local(q)
        if boundary:
            rejected += 1
            continue
        produced += 1
        yield L.point(q.x, q.y), interior, rejected


def sample_oracle(P: CSPolygon, L: Lattice, budget: int, seed: int = 0) -> OracleSummary:
    counter = TranslateCounter(P, L)
    seen: Counter = Counter()
    rejected = 0
    for _, interior, rejected in generic_samples(counter, budget, seed):
        seen[interior] += 1
    return OracleSummary(budget, rejected, dict(sorted(seen.items())), seed)


def verify_kfold(P, L: Lattice, k: int, sample_budget: int = 1000, seed: int = 0) -> TilingCertificate:
    """Certify that ``P + L`` is a ``k``-fold tiling and cross-check by sampling.

    Raises :class:`BolleFailed` if the edge criterion fails or gives another
    multiplicity, :class:`MultiplicityMismatch` if the oracle disagrees.
    """
    if k < 1:
        raise ValueError("k must be positive")
    report = bolle_check(P, L)
    if not report.passed:
        bad = report.failures[0]
        raise BolleFailed(f"edge {bad.edge}: {bad.reason}", report)
    if report.k != k:
        raise BolleFailed(f"edge criterion holds but area/det = {report.k}, not {k}", report)
    oracle = None
    if sample_budget:
        oracle = sample_oracle(report.polygon, L, sample_budget, seed)
        if set(oracle.multiplicities) != {k}:
            raise MultiplicityMismatch(f"sampled multiplicities {oracle.multiplicities}, expected {k}")
    return TilingCertificate(report.polygon, L, k, report.evidence, oracle)


@dataclass(frozen=True)
class MultiplicityDecomposition:
    """Local split of the multiplicity at a point.

    ``interior_count`` counts translates containing ``at`` in their interior;
    ``turning`` is the floating sum of inner angles at ``at`` over translates
    whose boundary passes through it, divided by 2*pi.  ``turning_exact`` is
    the exact complement ``k - interior_count``.
    """

    at: Rat2
    k: int
    interior_count: int
    boundary_translates: tuple[tuple[Rat2, Location], ...]
    turning: float
    turning_exact: int = field(default=0)


def _inner_angle(P: CSPolygon, loc: Location) -> float:
    if loc.kind == "edge":
        return math.pi
    v = P.vertex(loc.index)
    a = P.vertex(loc.index + 1) - v
    b = P.vertex(loc.index - 1) - v
    return math.atan2(float(a.cross(b)), float(a.dot(b)))


def multiplicity_decomposition_at(P, L: Lattice, p: Rat2, certificate: TilingCertificate | None = None,
                                  seed: int = 0) -> MultiplicityDecomposition:
    P = _as_centered_polygon(P)
    if certificate is None:
        report = bolle_check(P, L)
        if not report.passed:
            raise NotCertified("polygon and lattice do not form a multiple tiling")
        k = report.k
    else:
        k = certificate.k
    counter = TranslateCounter(P, L)
    interior, touching = counter.boundary_translates(p)
    turning = sum(_inner_angle(P, loc) for _, loc in touching) / (2 * math.pi)
    if abs(turning - round(2 * turning) / 2) > 1e-9:
        raise MultiplicityMismatch(f"turning {turning} is not on the half-integer grid")
    exact = k - interior
    if abs(turning - exact) > 1e-9:
        raise MultiplicityMismatch(f"interior {interior} + turning {turning} != {k}")
    # a nearby generic point must be covered exactly k times
    rng = random.Random(seed)
    q = counter.frame(p)
    while True:
        eps = Fraction(1, 2**40)
        q2 = Rat2(q.x + eps * rng.randrange(1, 2**20), q.y + eps * rng.randrange(1, 2**20))
        near_interior, near_boundary = counter.count_local(q2)
        if not near_boundary:
            break
    if near_interior != k:
        raise MultiplicityMismatch(f"perturbed point covered {near_interior} times, expected {k}")
    return MultiplicityDecomposition(p, k, interior, tuple(touching), turning, exact)


def superlattices(L0: Lattice, index: int) -> list[Lattice]:
    """All lattices containing ``L0`` with index ``index``, deduplicated."""
    b1, b2 = L0.canonical_basis()
    found = {}
    for a in range(1, index + 1):
        if index % a:
            continue
        d = index // a
        for c in range(d):
            l1 = b1 / a
            l2 = (b2 - l1 * c) / d
            lat = Lattice(l1, l2)
            found.setdefault(lat.key(), lat)
    return [found[key] for key in sorted(found)]


@dataclass
class LatticeSearch:
    lattices: list[Lattice]
    subsets_tried: int
    rank_deficient: list[tuple[int, ...]]
    candidates_checked: int

    @property
    def complete(self) -> bool:
        return not self.rank_deficient


def search_tiling_lattices(P: CSPolygon, k: int) -> LatticeSearch:
    """Every lattice ``L`` for which ``P + L`` is a ``k``-fold tiling.

    Each edge contributes either ``2 * midpoint`` or its edge vector to any
    certifying lattice, so ``L`` contains the lattice generated by one such
    choice per symmetric edge pair; ``L`` is then one of finitely many
    superlattices of the right index.
    """
    if k < 1:
        raise ValueError("k must be positive")
    m = P.m
    A = P.area
    found: dict[tuple, Lattice] = {}
    deficient = []
    checked = 0
    for mask in range(1 << m):
        gens = []
        for i in range(m):
            gens.append(P.midpoint(i) * 2 if mask >> i & 1 else P.edge(i))
        L0 = Lattice.from_generators(gens)
        if L0 is None:
            deficient.append(tuple(i for i in range(m) if mask >> i & 1))
            continue
        n = L0.det * k / A
        if n.denominator != 1 or n < 1:
            continue
        for L in superlattices(L0, int(n)):
            if L.key() in found:
                continue
            checked += 1
            rep = bolle_check(P, L)
            if rep.passed and rep.k == k:
                found[L.key()] = L
    if len(deficient) == 1 << m:
        raise RankDeficientGenerators("every generator choice is collinear")
    if deficient:
        log.warning("lattice search incomplete: rank-deficient generator choices %s", deficient)
    lattices = [found[key] for key in sorted(found)]
    return LatticeSearch(lattices, 1 << m, deficient, checked)


def find_tiling_lattice(P: CSPolygon, k: int) -> list[Lattice]:
    return search_tiling_lattices(P, k).lattices


def least_multiplicity(P: CSPolygon, k_max: int) -> tuple[int, list[Lattice]] | None:
    """Smallest ``k <= k_max`` admitting a certifying lattice, with those lattices."""
    for k in range(1, k_max + 1):
        lattices = find_tiling_lattice(P, k)
        if lattices:
            return k, lattices
    return None
