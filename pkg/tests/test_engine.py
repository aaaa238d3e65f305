"""Dynamics tests: spec examples, replay consistency, differential checks
against the pure-Python reference, and the performance contract."""

import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bootperc.engine import (
    CubeClass,
    ProcessParams,
    classify_cube,
    evolve_step,
    evolve_until_fixation,
    is_internally_spanned,
    percolation_time,
    span,
    uninfected_at,
)
from bootperc.lattice import Boundary, LatticeShape, Region, SiteSet, cube
from bootperc.sampler import bernoulli_field

from reference import bfs_eccentricity, reference_schedule

TORUS = Boundary.TORUS
OPEN = Boundary.OPEN

S33 = LatticeShape(2, 3, OPEN)
P33 = ProcessParams(S33, 2)
DIAG = SiteSet.from_sites(S33, [(1, 1), (2, 2), (3, 3)])


class TestEvolveStep:
    def test_empty_fixed_point(self):
        assert evolve_step(SiteSet.empty(S33), P33) == SiteSet.empty(S33)

    def test_full_fixed_point(self):
        assert evolve_step(SiteSet.full(S33), P33) == SiteSet.full(S33)

    def test_diagonal_one_step(self):
        result = evolve_step(DIAG, P33)
        expected = SiteSet.from_sites(
            S33, [(1, 1), (2, 2), (3, 3), (1, 2), (2, 1), (2, 3), (3, 2)]
        )
        assert result == expected

    def test_shape_mismatch(self):
        other = SiteSet.empty(LatticeShape(2, 4, OPEN))
        with pytest.raises(ValueError):
            evolve_step(other, P33)


class TestSchedule:
    def test_full_seed_all_zero(self):
        sch = evolve_until_fixation(SiteSet.full(S33), P33)
        assert sch.percolation_time() == 0
        assert all(sch.time_of(s) == 0 for s in SiteSet.full(S33).sites())

    def test_diagonal_schedule(self):
        sch = evolve_until_fixation(DIAG, P33)
        expected = {
            (1, 1): 0, (2, 2): 0, (3, 3): 0,
            (1, 2): 1, (2, 1): 1, (2, 3): 1, (3, 2): 1,
            (1, 3): 2, (3, 1): 2,
        }
        assert {s: sch.time_of(s) for s in expected} == expected
        assert sch.percolation_time() == 2

    def test_empty_seed_never(self):
        sch = evolve_until_fixation(SiteSet.empty(S33), P33)
        assert sch.percolation_time() is None
        assert all(sch.time_of(s) is None for s in SiteSet.full(S33).sites())

    def test_levels_nested_and_replay(self):
        shape = LatticeShape(2, 6, TORUS)
        params = ProcessParams(shape, 2)
        field = bernoulli_field(shape, 0.35, 99)
        sch = evolve_until_fixation(field, params)
        horizon = sch.max_finite_time()
        for t in range(horizon):
            level = sch.level(t)
            nxt = sch.level(t + 1)
            assert level.issubset(nxt)
            assert evolve_step(level, params) == nxt

    def test_fixation_bound(self):
        shape = LatticeShape(2, 5, OPEN)
        field = bernoulli_field(shape, 0.4, 3)
        sch = evolve_until_fixation(field, ProcessParams(shape, 2))
        assert sch.max_finite_time() <= shape.volume

    @pytest.mark.parametrize("seed", range(4))
    def test_infection_time_minimality(self, seed):
        # time t >= 1 means the threshold was met at t-1 and not at t-2
        from bootperc.lattice import neighbors

        shape = LatticeShape(2, 5, TORUS)
        r = 2
        field = bernoulli_field(shape, 0.3, seed)
        sch = evolve_until_fixation(field, ProcessParams(shape, r))
        for idx in range(shape.volume):
            site = shape.site_at(idx)
            t = sch.time_of(site)
            if t is None or t == 0:
                continue
            hot = sum(
                1 for nb in neighbors(site, shape)
                if sch.time_of(nb) is not None and sch.time_of(nb) < t
            )
            assert hot >= r
            if t >= 2:
                earlier = sum(
                    1 for nb in neighbors(site, shape)
                    if sch.time_of(nb) is not None and sch.time_of(nb) <= t - 2
                )
                assert earlier < r


class TestSpanAndTime:
    def test_span_idempotent(self):
        for seed in range(5):
            field = bernoulli_field(S33, 0.4, seed)
            once = span(field, P33)
            assert span(once, P33) == once

    def test_diagonal_spans_everything(self):
        assert span(DIAG, P33).count == 9

    def test_single_site_high_threshold(self):
        one = SiteSet.from_sites(S33, [(2, 2)])
        assert span(one, P33).sites() == [(2, 2)]

    def test_percolation_time_examples(self):
        assert percolation_time(SiteSet.full(S33), P33) == 0
        assert percolation_time(DIAG, P33) == 2
        assert percolation_time(SiteSet.empty(S33), P33) is None

    @pytest.mark.parametrize("boundary", [TORUS, OPEN])
    @pytest.mark.parametrize("d,n", [(1, 6), (2, 4), (3, 3)])
    def test_r1_spans_from_any_seed(self, d, n, boundary):
        shape = LatticeShape(d, n, boundary)
        params = ProcessParams(shape, 1)
        seed_site = shape.site_at(shape.volume // 2)
        A0 = SiteSet.from_sites(shape, [seed_site])
        T = percolation_time(A0, params)
        assert T == bfs_eccentricity([seed_site], d, n, boundary is TORUS)


class TestDifferential:
    @pytest.mark.parametrize("boundary", [TORUS, OPEN])
    @pytest.mark.parametrize("d,n", [(1, 7), (2, 4), (2, 5), (3, 3)])
    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_matches_reference_schedule(self, d, n, boundary, r):
        shape = LatticeShape(d, n, boundary)
        params = ProcessParams(shape, r)
        for seed in range(4):
            field = bernoulli_field(shape, 0.4, seed * 7 + r)
            sch = evolve_until_fixation(field, params)
            expected = reference_schedule(
                set(field.sites()), d, n, boundary is TORUS, r
            )
            actual = {
                s: sch.time_of(s)
                for s in (shape.site_at(i) for i in range(shape.volume))
                if sch.time_of(s) is not None
            }
            assert actual == expected

    @given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_seed(self, seed_a, seed_extra):
        shape = LatticeShape(2, 5, TORUS)
        params = ProcessParams(shape, 2)
        small = bernoulli_field(shape, 0.3, seed_a)
        extra = bernoulli_field(shape, 0.2, seed_extra)
        large = small | extra
        assert span(small, params).issubset(span(large, params))


class TestInternallySpanned:
    def test_superset_seed(self):
        D = Region(((2, 4), (2, 4)))
        shape = LatticeShape(2, 5, OPEN)
        assert is_internally_spanned(D, SiteSet.full(shape), 2)

    def test_disjoint_seed(self):
        D = Region(((2, 4), (2, 4)))
        shape = LatticeShape(2, 5, OPEN)
        A0 = SiteSet.from_sites(shape, [(1, 1)])
        assert not is_internally_spanned(D, A0, 1)

    def test_diagonal_inside_box(self):
        D = cube(2, 3)
        assert is_internally_spanned(D, DIAG, 2)

    def test_requires_subcube(self):
        with pytest.raises(ValueError):
            is_internally_spanned(Region(((1,), (1, 3))), DIAG, 2)

    def test_boundary_of_region_is_open(self):
        # the induced dynamics must not see neighbors outside D
        shape = LatticeShape(2, 5, OPEN)
        D = Region(((2, 3), (2, 3)))
        outside_ring = [
            s for s in SiteSet.full(shape).sites()
            if not D.contains(s)
        ]
        A0 = SiteSet.from_sites(shape, outside_ring + [(2, 2)])
        # inside D only (2,2) is seeded; alone it cannot span the 2x2 box
        assert not is_internally_spanned(D, A0, 2)


class TestClassifyCube:
    def test_full_strongly_good(self):
        assert classify_cube(cube(2, 3), SiteSet.full(S33), 2) is CubeClass.STRONGLY_GOOD

    def test_center_semi_good(self):
        center_only = SiteSet.from_sites(S33, [(2, 2)])
        assert classify_cube(cube(2, 3), center_only, 2) is CubeClass.SEMI_GOOD

    def test_empty_d3_bad(self):
        shape = LatticeShape(3, 3, OPEN)
        assert classify_cube(cube(3, 3), SiteSet.empty(shape), 3) is CubeClass.BAD

    def test_m2_never_bad(self):
        shape = LatticeShape(2, 2, OPEN)
        for bits in range(16):
            sites = [shape.site_at(i) for i in range(4) if bits >> i & 1]
            result = classify_cube(cube(2, 2), SiteSet.from_sites(shape, sites), 2)
            assert result is not CubeClass.BAD

    def test_m1_rejected(self):
        shape = LatticeShape(2, 1, OPEN)
        with pytest.raises(ValueError):
            classify_cube(cube(2, 1), SiteSet.full(shape), 2)

    @pytest.mark.parametrize("seed", range(6))
    def test_symmetry_invariance(self, seed):
        m = 4
        shape = LatticeShape(2, m, OPEN)
        field = bernoulli_field(shape, 0.4, seed)
        base = classify_cube(cube(2, m), field, 2)
        grid = field.mask.reshape((m, m), order="F")
        for transform in (grid.T, grid[::-1, :], grid[:, ::-1], grid[::-1, ::-1].T):
            moved = SiteSet(shape, np.ascontiguousarray(transform).ravel(order="F"))
            assert classify_cube(cube(2, m), moved, 2) is base


class TestUninfectedAt:
    def test_initial_sites_never_uninfected(self):
        sch = evolve_until_fixation(DIAG, P33)
        for t in range(4):
            assert not uninfected_at((1, 1), t, sch)

    def test_never_site(self):
        sch = evolve_until_fixation(SiteSet.empty(S33), P33)
        for t in range(5):
            assert uninfected_at((2, 2), t, sch)

    def test_threshold_crossing(self):
        sch = evolve_until_fixation(DIAG, P33)
        assert uninfected_at((1, 3), 1, sch)
        assert not uninfected_at((1, 3), 2, sch)


class TestParams:
    def test_threshold_validation(self):
        with pytest.raises(ValueError):
            ProcessParams(S33, 0)

    def test_inert_threshold_warns(self):
        with pytest.warns(UserWarning):
            ProcessParams(S33, 5)


def test_performance_contract():
    shape = LatticeShape(2, 1024, TORUS)
    params = ProcessParams(shape, 2)
    field = bernoulli_field(shape, 0.35, 0)
    evolve_until_fixation(field, params)  # warm caches
    field = bernoulli_field(shape, 0.35, 1)
    start = time.perf_counter()
    sch = evolve_until_fixation(field, params)
    elapsed = time.perf_counter() - start
    assert sch.percolates
    assert elapsed < 1.0, f"full n=1024 evolution took {elapsed:.2f}s"
