"""1D DP exactness, packing invariants, 2D search, and family conditions."""

import pytest

from bvosc import (
    BVFunction1D,
    Cube,
    HalfplaneIndicator,
    Interval,
    LatticeTooLargeError,
    LinearField,
    total_variation,
)
from bvosc.packing import (
    PackingProblem,
    enumerate_candidates_1d,
    g_sweep,
    good_family_check,
    max_weight_disjoint,
    prune_and_resolve,
    solve_1d,
    solve_2d,
)

from conftest import random_bv_function, subset_search_max_disjoint


def jump_fn():
    return BVFunction1D(domain=Interval(-1, 1), breakpoints=(0.0,),
                        slopes=(0.0, 0.0), atoms=((0.0, 1.0),))


def linear_fn():
    return BVFunction1D(domain=Interval(0, 1), slopes=(1.0,))


def mix_fn():
    return BVFunction1D(domain=Interval(-1, 1), breakpoints=(0.0,),
                        slopes=(1.0, 1.0), atoms=((0.0, 1.0),))


def kprob(f, domain, eps, steps=16):
    return PackingProblem(f=f, domain=domain, mode="keps", eps=eps,
                          lattice_step=eps / steps)


class TestSolve1D:
    def test_pure_jump_single_straddle(self):
        fam = solve_1d(kprob(jump_fn(), Interval(-1, 1), 0.25))
        assert fam.value == pytest.approx(0.5, abs=1e-12)
        assert len(fam.cubes) == 1
        iv = fam.cubes[0].cube
        assert iv.center == pytest.approx(0.0, abs=1e-12)
        assert fam.exact

    def test_constant_gives_empty_family(self):
        f = BVFunction1D(domain=Interval(0, 1))
        fam = solve_1d(kprob(f, Interval(0, 1), 0.25))
        assert fam.value == 0.0
        assert fam.cubes == ()

    def test_linear_tiling(self):
        fam = solve_1d(kprob(linear_fn(), Interval(0, 1), 0.25, steps=4))
        assert fam.value == pytest.approx(0.25, abs=1e-12)
        assert len(fam.cubes) == 4

    def test_disjointness_and_bounds(self):
        fam = solve_1d(kprob(mix_fn(), Interval(-1, 1), 1 / 8))
        ivs = [c.cube for c in fam.cubes]
        for a, b in zip(ivs, ivs[1:]):
            assert a.b <= b.a + 1e-12
        assert fam.value <= fam.upper_bound + 1e-12
        assert fam.upper_bound == pytest.approx(0.5 * total_variation(mix_fn()))

    def test_candidate_cap(self):
        with pytest.raises(LatticeTooLargeError):
            solve_1d(PackingProblem(f=mix_fn(), domain=Interval(-1, 1),
                                    mode="geps", eps=0.5, lattice_step=1e-6),
                     max_candidates=1000)


class TestDPOracle:
    def test_dp_equals_subset_search_random(self, rng):
        for _ in range(30):
            n = int(rng.integers(5, 16))
            lefts = rng.uniform(0, 10, size=n)
            widths = rng.uniform(0.3, 3.0, size=n)
            weights = rng.uniform(0.1, 5.0, size=n)
            cands = [(float(l), float(l + w), float(wt), None)
                     for l, w, wt in zip(lefts, widths, weights)]
            dp_value, chosen = max_weight_disjoint(cands)
            brute = subset_search_max_disjoint([(c[0], c[1], c[2]) for c in cands])
            assert dp_value == pytest.approx(brute, abs=1e-12)
            # chosen family must itself be disjoint and realize the value
            picked = sorted((cands[k][0], cands[k][1], cands[k][2]) for k in chosen)
            for a, b in zip(picked, picked[1:]):
                assert a[1] <= b[0] + 1e-9
            assert sum(p[2] for p in picked) == pytest.approx(dp_value)

    def test_lattice_candidates_vs_subset_search(self, rng):
        for _ in range(5):
            f = random_bv_function(rng, a=0.0, b=1.0)
            prob = kprob(f, Interval(0, 1), 0.25, steps=2)
            cands = enumerate_candidates_1d(prob)
            assert len(cands) <= 20
            fam = solve_1d(prob)
            brute = subset_search_max_disjoint([(c[0], c[1], c[2]) for c in cands])
            assert fam.value == pytest.approx(brute, abs=1e-12)


class TestInvariants:
    def test_g_dominates_k(self):
        f = mix_fn()
        for eps in (0.25, 0.125):
            k = solve_1d(kprob(f, f.domain, eps)).value
            g = solve_1d(PackingProblem(f=f, domain=f.domain, mode="geps",
                                        eps=eps, lattice_step=eps / 16)).value
            assert g >= k - 1e-12

    def test_refining_lattice_never_decreases(self):
        f = mix_fn()
        vals = [solve_1d(kprob(f, f.domain, 0.25, steps=s)).value
                for s in (2, 4, 8, 16)]
        for a, b in zip(vals, vals[1:]):
            assert b >= a - 1e-12

    def test_superadditivity_disjoint_components(self, rng):
        f = random_bv_function(rng, a=0.0, b=1.0)
        U, V = Interval(0.0, 0.43), Interval(0.55, 1.0)
        eps = 1 / 32
        joint = solve_1d(PackingProblem(f=f, domain=(U, V), mode="geps",
                                        eps=eps, lattice_step=eps / 8)).value
        single = sum(
            solve_1d(PackingProblem(f=f, domain=(W,), mode="geps",
                                    eps=eps, lattice_step=eps / 8)).value
            for W in (U, V))
        assert joint >= single - 1e-12

    def test_sandwich_for_small_eps(self):
        f = mix_fn()
        eps = 2 ** -7
        g = solve_1d(PackingProblem(f=f, domain=f.domain, mode="geps",
                                    eps=eps, lattice_step=eps / 16)).value
        tv = total_variation(f)
        assert 0.25 * tv - 0.02 <= g <= 0.5 * tv + 1e-12

    def test_g_sweep_monotone(self):
        f = mix_fn()
        points = g_sweep(f, f.domain, [2 ** -4, 2 ** -5, 2 ** -6])
        vals = [p.value for p in points]
        for a, b in zip(vals, vals[1:]):
            assert b <= a + 1e-9  # nonincreasing along decreasing eps

    def test_g_sweep_pure_jump_constant(self):
        f = jump_fn()
        points = g_sweep(f, f.domain, [2 ** -3, 2 ** -4, 2 ** -5], steps_per_eps=8)
        for p in points:
            assert p.value == pytest.approx(0.5, abs=1e-12)

    def test_g_sweep_requires_decreasing(self):
        with pytest.raises(ValueError):
            g_sweep(mix_fn(), Interval(-1, 1), [0.1, 0.2])


class TestSolve2D:
    def test_linear_tiling_quarter(self):
        f = LinearField((1.0, 0.0))
        dom = Cube((0.0, 0.0), 1.0)
        prob = PackingProblem(f=f, domain=dom, mode="keps", eps=0.25,
                              lattice_step=0.25)
        fam = solve_2d(prob, seed=1)
        tv = total_variation(f, dom)
        assert fam.value == pytest.approx(0.25 * tv, rel=0.10)
        assert not fam.exact
        assert fam.value <= fam.upper_bound + 1e-12

    def test_halfplane_straddling_row(self):
        f = HalfplaneIndicator((0.0, 1.0), 0.0)
        dom = Cube((0.0, 0.0), 1.0)
        eps = 0.25
        prob = PackingProblem(f=f, domain=dom, mode="keps", eps=eps,
                              lattice_step=eps / 4)
        fam = solve_2d(prob, seed=1)
        # explicit straddling row as an oracle lower bound
        row_value = 4 * (eps * 0.5 * eps)  # 4 cubes, each weight eps * osc = eps/2 * eps
        assert fam.value >= row_value - 1e-9
        assert fam.value == pytest.approx(0.5 * eps * 4, rel=0.05)

    def test_constant_zero(self):
        f = LinearField((0.0, 0.0))
        prob = PackingProblem(f=f, domain=Cube((0.0, 0.0), 1.0), mode="keps",
                              eps=0.25, lattice_step=0.25)
        fam = solve_2d(prob, seed=3)
        assert fam.value == 0.0
        assert fam.cubes == ()

    def test_deterministic_given_seed(self):
        f = HalfplaneIndicator((0.3, 1.0), 0.02)
        prob = PackingProblem(f=f, domain=Cube((0.0, 0.0), 1.0), mode="geps",
                              eps=0.25, lattice_step=0.125)
        a = solve_2d(prob, seed=7, budget=60)
        b = solve_2d(prob, seed=7, budget=60)
        assert a.value == b.value
        assert [c.cube for c in a.cubes] == [c.cube for c in b.cubes]

    def test_thread_count_does_not_change_result(self):
        f = HalfplaneIndicator((0.3, 1.0), 0.02)
        prob = PackingProblem(f=f, domain=Cube((0.0, 0.0), 1.0), mode="geps",
                              eps=0.25, lattice_step=0.125)
        serial = solve_2d(prob, seed=5, budget=40, threads=1)
        threaded = solve_2d(prob, seed=5, budget=40, threads=4)
        assert serial.value == threaded.value
        assert [c.cube for c in serial.cubes] == [c.cube for c in threaded.cubes]

    def test_family_is_disjoint(self):
        f = HalfplaneIndicator((1.0, 0.2), 0.0)
        prob = PackingProblem(f=f, domain=Cube((0.0, 0.0), 1.0), mode="geps",
                              eps=0.25, lattice_step=0.125)
        fam = solve_2d(prob, seed=2, budget=40)
        cubes = [c.cube for c in fam.cubes]
        for i, a in enumerate(cubes):
            for b in cubes[i + 1:]:
                assert not a.intersects(b)


class TestGoodFamilies:
    def test_straddling_jump_cube_passes(self):
        fam = solve_1d(kprob(jump_fn(), Interval(-1, 1), 0.25))
        checks = good_family_check(fam, jump_fn(), tau=0.9)
        assert all(c.ok for c in checks)
        assert checks[0].quotient >= 1 / 8

    def test_frame_atom_fails_core_condition(self):
        # atom at distance 0.47 * side from the cube center sits in the frame
        f = BVFunction1D(domain=Interval(-1, 1), atoms=((0.47, 1.0),))
        from bvosc.packing import PackedCube, PackingFamily
        from bvosc.oscillation import osc as osc_stats
        iv = Interval(-0.5, 0.5)
        pc = PackedCube(iv, osc_stats(f, iv), osc_stats(f, iv).osc)
        fam = PackingFamily((pc,), pc.weight, pc.weight, 1.0, True, "keps", 1.0, 0.1)
        checks = good_family_check(fam, f, tau=0.9)
        assert not checks[0].core_mass_ok
        assert not checks[0].ok

    def test_linear_cube_passes(self):
        fam = solve_1d(kprob(linear_fn(), Interval(0, 1), 0.25, steps=4))
        checks = good_family_check(fam, linear_fn(), tau=0.9)
        assert all(c.ok for c in checks)
        assert all(abs(c.quotient - 0.25) < 1e-9 for c in checks)

    def test_prune_and_resolve_clean(self):
        f = BVFunction1D(domain=Interval(-1, 1), breakpoints=(0.0,),
                         slopes=(1.0, 1.0), atoms=((0.47, 1.0), (0.0, 1.0)))
        prob = kprob(f, Interval(-1, 1), 0.25)
        fam, checks = prune_and_resolve(prob, tau=0.9)
        assert all(c.ok for c in checks)
        assert fam.value > 0
