"""Decide which of the known multiple-tile classes a polygon belongs to."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .decagons import _family_canonicals
from .families import FAMILY_K, OCTAGON_FAMILIES
from .geometry import CSPolygon, Lattice, apply_affine, canonical_form, points, polygon_from_points, to_lattice_frame
from .octagons import family_parameter
from .tiling import bolle_check, least_multiplicity

K_MAX = 6

# lower bounds taken as known results; they quantify over all polygons and are not checked here
CITED_BOUNDS = {
    6: "centrally symmetric dodecagons have lattice multiplicity at least 7 (cited result, not verified)",
    7: "centrally symmetric 2m-gons with m >= 7 have multiplicity at least 7 (cited result, not verified)",
}


@dataclass
class Classification:
    polygon: CSPolygon
    m: int
    shape: str
    k: int | None
    lattices: list[Lattice] = field(default_factory=list)
    family: str | None = None
    parameter: Fraction | None = None
    verdict: str = ""
    cited: str | None = None

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "shape": self.shape,
            "k": self.k,
            "lattices": [[b.to_strings() for b in L.basis] for L in self.lattices],
            "family": self.family,
            "parameter": None if self.parameter is None else str(self.parameter),
            "verdict": self.verdict,
            "cited": self.cited,
        }


SHAPES = {2: "parallelogram", 3: "hexagon", 4: "octagon", 5: "decagon", 6: "dodecagon"}


def _one_fold_lattice(P: CSPolygon) -> Lattice:
    # spanned by v0 + v1 and v1 + v2, i.e. twice two consecutive midpoints
    return Lattice(P.vertex(0) + P.vertex(1), P.vertex(1) + P.vertex(2))


def _match_octagon(P: CSPolygon, L: Lattice, k: int):
    Q = apply_affine(P, to_lattice_frame(L))
    for key, fam in OCTAGON_FAMILIES.items():
        if fam.k != k or key == "six_fold_as_printed":
            continue
        s = family_parameter(fam, Q)
        if s is not None:
            return fam.name, s
    return None, None


def _match_decagon(P: CSPolygon, L: Lattice, k: int):
    Q = apply_affine(P, to_lattice_frame(L))
    doubled = [u * 2 for u in Q.midpoints]
    if not all(u.is_integral() for u in doubled):
        return None
    key = canonical_form(polygon_from_points(doubled)).key()
    names = sorted(name for name, fk in _family_canonicals().items() if fk == key and FAMILY_K[name] == k)
    return "decagon-" + "/".join(names) if names else None


def classify(P) -> Classification:
    """Classify ``P`` among multiple lattice tiles of multiplicity at most six.

    Float coordinates raise :class:`IrrationalInput`.
    """
    if not isinstance(P, CSPolygon):
        P = polygon_from_points(points(P))
    m = P.m
    shape = SHAPES.get(m, f"{2 * m}-gon")
    if m <= 3:
        L = _one_fold_lattice(P)
        rep = bolle_check(P, L)
        assert rep.passed and rep.k == 1
        return Classification(P, m, shape, 1, [L], verdict=f"{shape}, one-fold lattice tile (k=1)")
    if m >= 6:
        cited = CITED_BOUNDS[min(m, 7)]
        return Classification(P, m, shape, None, verdict=f"not a six-fold lattice tile: {cited}", cited=cited)
    found = least_multiplicity(P, K_MAX)
    if found is None:
        return Classification(P, m, shape, None, verdict=f"{shape} with no lattice tiling of multiplicity <= {K_MAX}")
    k, lattices = found
    family = parameter = None
    for L in lattices:
        if m == 4:
            family, parameter = _match_octagon(P, L, k)
        else:
            family = _match_decagon(P, L, k)
        if family:
            break
    words = {5: "five-fold", 6: "six-fold"}.get(k, f"{k}-fold")
    if family:
        where = f" ({OCTAGON_FAMILIES_SYMBOL.get(family, 'parameter')}={parameter})" if parameter is not None else ""
        verdict = f"{words} {shape} family {family}{where}, k={k}"
    else:
        verdict = f"{words} {shape} lattice tile outside the known families, k={k}"
    return Classification(P, m, shape, k, lattices, family, parameter, verdict)


OCTAGON_FAMILIES_SYMBOL = {fam.name: fam.symbol for fam in OCTAGON_FAMILIES.values()}
