from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import assume, strategies as st

from latticetiles.decagons import enumerate_q10
from latticetiles.families import FAMILY_MIDPOINTS, decagon_from_midpoints, freedom_region, octagon_family
from latticetiles.geometry import AffineMap, Lattice, convex_hull, polygon_from_points, pt
from latticetiles.octagons import enumerate_octagons

Z2 = Lattice.integer()


def unit_square():
    return polygon_from_points([(F(1, 2), F(1, 2)), (F(-1, 2), F(1, 2)), (F(-1, 2), F(-1, 2)), (F(1, 2), F(-1, 2))])


def decagon_a(w=(F(-1, 8), F(5, 6))):
    return decagon_from_midpoints(FAMILY_MIDPOINTS["A"], pt(*w), 0)


def decagon_b():
    spec = FAMILY_MIDPOINTS["B"]
    return decagon_from_midpoints(spec, freedom_region(spec, 4).interior_point(), 4)


def certified_tilings():
    """(name, polygon, lattice, k) for the shipped six- and five-fold tiles."""
    return [
        ("decagon-A", decagon_a(), Z2, 6),
        ("decagon-B", decagon_b(), Z2, 6),
        ("octagon6", octagon_family("six_fold_corrected", F(1, 10)), Z2, 6),
        ("octagon6-tall", octagon_family("six_fold_tall", F(1, 20)), Z2, 6),
        ("octagon5-beta", octagon_family("five_fold_beta", F(3, 10)), Z2, 5),
        ("square", unit_square(), Z2, 1),
    ]


@st.composite
def unimodular_maps(draw, steps=4):
    """Products of elementary shears and a sign flip, so entries stay small."""
    M = AffineMap.identity()
    for _ in range(draw(st.integers(1, steps))):
        k = draw(st.integers(-3, 3))
        M = (AffineMap(1, k, 0, 1) if draw(st.booleans()) else AffineMap(1, 0, k, 1)) @ M
    if draw(st.booleans()):
        M = AffineMap(-1, 0, 0, 1) @ M
    return M


@st.composite
def lattice_polygons(draw, coord=6):
    """Convex lattice polygons with at least three vertices (not necessarily symmetric)."""
    pts = draw(st.lists(st.tuples(st.integers(-coord, coord), st.integers(-coord, coord)), min_size=3, max_size=12, unique=True))
    hull = convex_hull([pt(*p) for p in pts])
    assume(len(hull) >= 3)
    return hull


@st.composite
def symmetric_lattice_polygons(draw, coord=5):
    pts = draw(st.lists(st.tuples(st.integers(-coord, coord), st.integers(-coord, coord)), min_size=2, max_size=8, unique=True))
    vs = [pt(*p) for p in pts if p != (0, 0)]
    hull = convex_hull(vs + [-v for v in vs])
    assume(len(hull) >= 4)
    return polygon_from_points(hull)


@pytest.fixture(scope="session")
def decagon_sweeps():
    return {k: enumerate_q10(k, sample_budget=200) for k in (5, 6)}


@pytest.fixture(scope="session")
def octagon_sweeps():
    return {k: enumerate_octagons(k, sample_budget=200) for k in (5, 6)}
