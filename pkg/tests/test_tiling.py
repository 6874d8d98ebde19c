from __future__ import annotations

import random
import time
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from latticetiles.errors import BolleFailed, NotCentered, NotCertified
from latticetiles.families import OCTAGON_FAMILIES, octagon_family
from latticetiles.geometry import AffineMap, Lattice, Rat2, apply_affine, polygon_from_points, pt
from latticetiles.tiling import (
    TranslateCounter,
    bolle_check,
    brute_force_multiplicity,
    covering_multiplicity_at,
    find_tiling_lattice,
    half_lattice_points_inside,
    least_multiplicity,
    multiplicity_decomposition_at,
    sample_oracle,
    superlattices,
    verify_kfold,
)

from conftest import Z2, certified_tilings, decagon_a, symmetric_lattice_polygons, unimodular_maps, unit_square


def sigma(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


class TestEdgeCriterion:
    def test_unit_square(self):
        rep = bolle_check(unit_square(), Z2)
        assert rep.passed and rep.k == 1
        assert all(ev.kind == "midpoint" for ev in rep.evidence)

    def test_decagon_a(self):
        rep = bolle_check(decagon_a(), Z2)
        assert rep.passed and rep.k == 6

    def test_printed_octagon_fails(self):
        rep = bolle_check(OCTAGON_FAMILIES["six_fold_as_printed"].raw(F(1, 10)), Z2)
        assert not rep.passed
        assert rep.ratio == 6 - F(4, 10)

    def test_lattice_vector_edge(self):
        # edge (2,0) at height 1: midpoint (0,1) is in L/2 anyway; shift by 1/4 so only the vector case applies
        P = polygon_from_points([(F(5, 4), 1), (F(-3, 4), 1), (F(-5, 4), -1), (F(3, 4), -1)])
        rep = bolle_check(P, Z2)
        top = [ev for ev in rep.evidence if ev.midpoint.y == 1][0]
        assert top.kind == "lattice_vector" and top.witness is not None
        assert rep.passed and rep.k == 4

    def test_half_lattice_points(self):
        assert half_lattice_points_inside(Z2, pt(0, 0), pt(2, 0)) == [F(1, 4), F(1, 2), F(3, 4)]
        assert half_lattice_points_inside(Z2, pt(F(1, 3), 0), pt(0, 1)) == []

    @pytest.mark.parametrize("name,P,L,k", certified_tilings())
    def test_certified(self, name, P, L, k):
        assert bolle_check(P, L).k == k


class TestCounters:
    @pytest.mark.parametrize("name,P,L,k", certified_tilings())
    def test_fast_counter_matches_brute_force(self, name, P, L, k):
        rnd = random.Random(7)
        for _ in range(40):
            p = Rat2(F(rnd.randrange(-4000, 4000), 997), F(rnd.randrange(-4000, 4000), 991))
            assert covering_multiplicity_at(P, L, p) == brute_force_multiplicity(P, L, p)

    @pytest.mark.parametrize("name,P,L,k", certified_tilings())
    def test_generic_points_covered_k_times(self, name, P, L, k):
        summary = sample_oracle(P, L, 300, seed=1)
        assert summary.multiplicities == {k: 300}

    def test_boundary_point(self):
        interior, boundary = covering_multiplicity_at(unit_square(), Z2, pt(F(1, 2), F(1, 3)))
        assert (interior, boundary) == (0, 2)

    def test_counter_is_fast(self):
        counter = TranslateCounter(decagon_a(), Z2)
        t = time.perf_counter()
        for i in range(1000):
            counter.count(Rat2(F(i, 1009), F(3 * i, 1013)))
        assert time.perf_counter() - t < 5


class TestVerify:
    def test_decagon_a(self):
        cert = verify_kfold(decagon_a(), Z2, 6, sample_budget=500)
        assert cert.k == 6 and cert.oracle.multiplicities == {6: 500}

    def test_wrong_k(self):
        with pytest.raises(BolleFailed):
            verify_kfold(decagon_a(), Z2, 5)

    def test_printed_octagon(self):
        with pytest.raises(BolleFailed):
            verify_kfold(OCTAGON_FAMILIES["six_fold_as_printed"].raw(F(1, 10)), Z2, 6)

    def test_not_centered(self):
        with pytest.raises(NotCentered):
            verify_kfold([(0, 0), (1, 0), (1, 1), (0, 1)], Z2, 1)

    def test_bad_k(self):
        with pytest.raises(ValueError):
            verify_kfold(unit_square(), Z2, 0)

    def test_deterministic(self):
        a = verify_kfold(decagon_a(), Z2, 6, sample_budget=200, seed=3)
        b = verify_kfold(decagon_a(), Z2, 6, sample_budget=200, seed=3)
        assert a == b


class TestDecomposition:
    def test_square_corner(self):
        d = multiplicity_decomposition_at(unit_square(), Z2, pt(F(1, 2), F(1, 2)))
        assert d.interior_count == 0 and len(d.boundary_translates) == 4
        assert d.turning == pytest.approx(1)

    def test_edge_point(self):
        P = decagon_a()
        d = multiplicity_decomposition_at(P, Z2, P.midpoint(0))
        assert d.interior_count + d.turning == pytest.approx(6)
        assert d.turning_exact == 6 - d.interior_count

    @pytest.mark.parametrize("name,P,L,k", certified_tilings())
    def test_every_vertex(self, name, P, L, k):
        for v in P.vertices:
            d = multiplicity_decomposition_at(P, L, v)
            assert d.interior_count + d.turning == pytest.approx(k)
            assert d.turning >= 1 - 1e-9

    def test_requires_tiling(self):
        with pytest.raises(NotCertified):
            multiplicity_decomposition_at(decagon_a(), Lattice(pt(2, 0), pt(0, 1)), pt(0, 0))


class TestLatticeSearch:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_superlattice_count(self, n):
        assert len(superlattices(Z2, n)) == sigma(n)
        assert all(L.det == F(1, n) for L in superlattices(Z2, n))

    def test_decagon_a(self):
        assert find_tiling_lattice(decagon_a(), 6) == [Z2]
        assert find_tiling_lattice(decagon_a(), 5) == []

    def test_printed_octagon(self):
        assert find_tiling_lattice(OCTAGON_FAMILIES["six_fold_as_printed"].raw(F(1, 10)), 6) == []

    def test_least_multiplicity(self):
        assert least_multiplicity(octagon_family("five_fold_beta", F(3, 10)), 6) == (5, [Z2])
        assert least_multiplicity(unit_square(), 3)[0] == 1

    @settings(max_examples=20, deadline=None)
    @given(symmetric_lattice_polygons(coord=3))
    def test_found_lattices_certify(self, P):
        found = least_multiplicity(P, 4)
        if found:
            k, lattices = found
            assert all(bolle_check(P, L).k == k for L in lattices)


class TestInvariance:
    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from(certified_tilings()), unimodular_maps())
    def test_unimodular_image(self, case, T):
        _, P, L, k = case
        P2 = apply_affine(P, T)
        L2 = Lattice(T(L.basis[0]), T(L.basis[1]))
        assert bolle_check(P2, L2).k == k
        assert sample_oracle(P2, L2, 50).multiplicities == {k: 50}

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from(certified_tilings()), st.integers(-5, 5), st.integers(-5, 5),
           st.fractions(-2, 2, max_denominator=97), st.fractions(-2, 2, max_denominator=89))
    def test_translation_equivariance(self, case, i, j, x, y):
        _, P, L, _ = case
        p = Rat2(x, y)
        assert covering_multiplicity_at(P, L, p) == covering_multiplicity_at(P, L, p + L.point(i, j))
