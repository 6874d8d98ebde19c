from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from latticetiles.errors import ClosureViolated, NotStrictlyConvex, ParameterOutOfRange
from latticetiles.families import (
    FAMILY_ANCHORS,
    FAMILY_K,
    FAMILY_MIDPOINTS,
    OCTAGON_FAMILIES,
    PUBLISHED_REGIONS,
    MidpointSpec,
    decagon_from_midpoints,
    family_midpoints,
    freedom_region,
    octagon_family,
)
from latticetiles.geometry import Rat2, points, pt
from latticetiles.tiling import bolle_check, least_multiplicity, sample_oracle, verify_kfold

from conftest import Z2

REAL_FAMILIES = [key for key in OCTAGON_FAMILIES if key != "six_fold_as_printed"]


def grid(lo, hi, n):
    return [lo + (hi - lo) * F(i, n + 1) for i in range(1, n + 1)]


class TestOctagonFamilies:
    def test_corrected_example(self):
        P = octagon_family("six_fold_corrected", F(1, 10))
        assert P.n == 8 and P.area == 6
        assert bolle_check(P, Z2).k == 6

    def test_beta_example(self):
        P = octagon_family("five_fold_beta", F(3, 10))
        assert P.area == 5 and bolle_check(P, Z2).k == 5

    @pytest.mark.parametrize("key", REAL_FAMILIES)
    def test_fifty_parameters_certify(self, key):
        fam = OCTAGON_FAMILIES[key]
        for t in fam.sample(50):
            P = fam.instantiate(t)
            assert P.n == 8
            assert bolle_check(P, Z2).k == fam.k
        for t in fam.sample(5):
            verify_kfold(fam.instantiate(t), Z2, fam.k, sample_budget=200)

    @pytest.mark.parametrize("key", REAL_FAMILIES)
    def test_endpoints_degenerate(self, key):
        fam = OCTAGON_FAMILIES[key]
        lo, hi = fam.interval
        assert fam.degenerates_at(lo) and fam.degenerates_at(hi)
        for t in (lo, hi, hi + F(1, 100)):
            with pytest.raises(ParameterOutOfRange):
                fam.instantiate(t)

    def test_alpha_one_sixth(self):
        with pytest.raises(ParameterOutOfRange):
            octagon_family("six_fold_corrected", F(1, 6))

    def test_unknown_variant(self):
        with pytest.raises(KeyError):
            octagon_family("seven_fold", F(1, 10))

    @pytest.mark.parametrize("alpha", grid(F(0), F(1, 6), 10))
    def test_printed_coordinates_fail(self, alpha):
        P = OCTAGON_FAMILIES["six_fold_as_printed"].raw(alpha)
        assert P.area == 6 - 4 * alpha
        assert not bolle_check(P, Z2).passed

    def test_tall_family_is_minimal(self):
        P = octagon_family("six_fold_tall", F(1, 20))
        assert least_multiplicity(P, 6) == (6, [Z2])
        assert sample_oracle(P, Z2, 500).multiplicities == {6: 500}


class TestMidpointSpecs:
    @pytest.mark.parametrize("which", sorted(FAMILY_MIDPOINTS))
    def test_closure(self, which):
        spec = family_midpoints(which)
        assert spec.closure_sum.is_zero()
        spec.check_closure()

    def test_closure_violated(self):
        bad = MidpointSpec(points([(0, 1), (1, 1), (F(3, 2), F(1, 2)), (F(3, 2), 0), (2, F(-1, 2))]))
        with pytest.raises(ClosureViolated):
            bad.check_closure()

    def test_unknown(self):
        with pytest.raises(KeyError):
            family_midpoints("C")


class TestFreedomRegions:
    @pytest.mark.parametrize("which", ["A", "B"])
    def test_published_region(self, which):
        region = freedom_region(FAMILY_MIDPOINTS[which], FAMILY_ANCHORS[which])
        assert region.same_vertices(PUBLISHED_REGIONS[which])

    def test_areas(self):
        assert freedom_region(FAMILY_MIDPOINTS["A"], 0).area == F(1, 24)
        assert freedom_region(FAMILY_MIDPOINTS["B"], 4).area == F(1, 24)  # kite, diagonals 1/3 and 1/4

    @pytest.mark.parametrize("which", sorted(FAMILY_MIDPOINTS))
    def test_membership_probe(self, which):
        spec = FAMILY_MIDPOINTS[which]
        anchor = FAMILY_ANCHORS[which]
        region = freedom_region(spec, anchor)
        xs = [v.x for v in region.vertices]
        ys = [v.y for v in region.vertices]
        inside = 0
        for x in grid(min(xs) - F(1, 10), max(xs) + F(1, 10), 7):
            for y in grid(min(ys) - F(1, 10), max(ys) + F(1, 10), 6):
                w = Rat2(x, y)
                if region.contains(w) and not region.on_boundary(w):
                    P = decagon_from_midpoints(spec, w, anchor)
                    assert P.n == 10 and bolle_check(P, Z2).k == FAMILY_K[which]
                    inside += 1
                else:
                    with pytest.raises(NotStrictlyConvex):
                        decagon_from_midpoints(spec, w, anchor)
        assert inside > 0

    def test_boundary_vertex(self):
        with pytest.raises(NotStrictlyConvex, match="boundary"):
            decagon_from_midpoints(FAMILY_MIDPOINTS["A"], pt(0, 1), 0)

    def test_outside(self):
        with pytest.raises(NotStrictlyConvex, match="outside"):
            decagon_from_midpoints(FAMILY_MIDPOINTS["A"], pt(1, 1), 0)

    @pytest.mark.parametrize("which", sorted(FAMILY_MIDPOINTS))
    def test_midpoints_round_trip(self, which):
        spec = FAMILY_MIDPOINTS[which]
        w = freedom_region(spec, FAMILY_ANCHORS[which]).interior_point()
        P = decagon_from_midpoints(spec, w, FAMILY_ANCHORS[which])
        assert set(P.midpoints) == set(spec.full)


@st.composite
def region_points(draw, which):
    region = freedom_region(FAMILY_MIDPOINTS[which], FAMILY_ANCHORS[which])
    vs = region.vertices
    weights = [draw(st.integers(1, 50)) for _ in vs]
    total = sum(weights)
    return Rat2(sum((F(c) * v.x for c, v in zip(weights, vs)), F(0)) / total,
                sum((F(c) * v.y for c, v in zip(weights, vs)), F(0)) / total)


class TestAreaIndependence:
    @settings(max_examples=50, deadline=None)
    @given(st.data())
    def test_area_constant_on_region(self, data):
        which = data.draw(st.sampled_from(sorted(FAMILY_MIDPOINTS)))
        w = data.draw(region_points(which))
        P = decagon_from_midpoints(FAMILY_MIDPOINTS[which], w, FAMILY_ANCHORS[which])
        assert P.area == FAMILY_K[which]
        assert bolle_check(P, Z2).k == FAMILY_K[which]
