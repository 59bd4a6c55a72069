"""Nested-interval construction, staircase exactness, and the two-scale mechanism."""

import numpy as np
import pytest

from bvosc import (
    CantorSpec,
    Interval,
    SpecFormatError,
    build_stage,
    cantor_function,
    osc,
    scale_schedule,
    total_variation,
)
from bvosc.bvfunction import sup_distance

CANONICAL = CantorSpec(ks=(4, 32), depth=2)


class TestStages:
    def test_stage_zero_is_unit_interval(self):
        st = build_stage(CANONICAL, 0)
        assert len(st.intervals) == 1
        assert (st.intervals[0].a, st.intervals[0].b) == (0.0, 1.0)

    def test_single_refinement_layout(self):
        st = build_stage(CantorSpec(ks=(4,), depth=1), 1)
        lefts = [iv.a for iv in st.intervals]
        lengths = [iv.length for iv in st.intervals]
        assert lefts == pytest.approx([0.0, 0.25, 0.5, 0.75])
        assert lengths == pytest.approx([1 / 16] * 4)

    @pytest.mark.filterwarnings("ignore:growth condition")
    @pytest.mark.parametrize("ks,depth", [((4, 32), 2), ((3, 9, 81), 3)])
    def test_counts_lengths_measure(self, ks, depth):
        spec = CantorSpec(ks=ks, depth=depth)
        for i in range(spec.depth + 1):
            st = build_stage(spec, i)
            r = spec.r(i)
            assert len(st.intervals) == r
            assert st.total_length == pytest.approx(1.0 / r, abs=1e-12)
            if i >= 1:
                for iv in st.intervals:
                    assert iv.length == pytest.approx(1.0 / r ** 2, abs=1e-15)

    def test_stages_are_nested(self):
        outer = build_stage(CANONICAL, 1).intervals
        inner = build_stage(CANONICAL, 2).intervals
        for iv in inner:
            assert any(o.a - 1e-12 <= iv.a and iv.b <= o.b + 1e-12 for o in outer)

    def test_out_of_range_level(self):
        with pytest.raises(ValueError):
            build_stage(CANONICAL, 3)

    def test_growth_condition_warns(self):
        with pytest.warns(UserWarning):
            CantorSpec(ks=(4, 8), depth=2)

    def test_bad_depth_rejected(self):
        with pytest.raises(SpecFormatError):
            CantorSpec(ks=(4,), depth=2)


class TestStaircase:
    def test_depth_zero_is_identity(self):
        u = cantor_function(CantorSpec(ks=(), depth=0))
        xs = np.linspace(0.01, 0.99, 17)
        assert np.allclose(u.values(xs), xs)

    @pytest.mark.parametrize("spec", [CantorSpec(ks=(4,), depth=1), CANONICAL])
    def test_endpoint_values_and_variation(self, spec):
        u = cantor_function(spec)
        assert total_variation(u) == pytest.approx(1.0, abs=1e-12)
        assert u.value(1e-12) == pytest.approx(0.0, abs=1e-9)
        assert u.value(1.0 - 1e-12) == pytest.approx(1.0, abs=1e-9)

    def test_nondecreasing_and_atom_free(self):
        u = cantor_function(CANONICAL)
        assert u.atoms == ()
        assert all(s >= 0 for s in u.piecewise.slopes)
        assert set(np.round(u.piecewise.slopes, 6)) <= {0.0, 128.0}

    @pytest.mark.filterwarnings("ignore:growth condition")
    def test_successive_depth_sup_bound(self):
        ks = (4, 32, 2048)
        prev = cantor_function(CantorSpec(ks=ks, depth=0))
        k_with_base = (1,) + ks
        for d in range(1, 3):
            cur = cantor_function(CantorSpec(ks=ks, depth=d))
            bound = 1.0 / (k_with_base[d - 1] * k_with_base[d])
            assert sup_distance(cur.piecewise, prev.piecewise) <= bound + 1e-12
            prev = cur


class TestScaleSchedule:
    def test_canonical_values(self):
        sched = scale_schedule(CANONICAL)
        assert sched.jump_scales == pytest.approx([1.0 / 512])
        assert sched.affine_scales == pytest.approx([4 ** -2 * 32 ** -0.5])

    def test_depth_one_rejected(self):
        with pytest.raises(ValueError):
            scale_schedule(CantorSpec(ks=(4,), depth=1))

    def test_exponent_parameter(self):
        sched = scale_schedule(CANONICAL, affine_exponent=0.25)
        assert sched.affine_scales[0] == pytest.approx(4 ** -2 * 32 ** -0.25)

    def test_jump_window_beats_affine_windows_quotientwise(self):
        # the mechanism: a spacing-scale window centered at a component edge is
        # jump-like; intermediate-scale windows are ramp-like
        u = cantor_function(CANONICAL)
        sched = scale_schedule(CANONICAL)
        js, as_ = sched.jump_scales[0], sched.affine_scales[0]
        edge = build_stage(CANONICAL, 2).intervals[5].a
        jump_q = osc(u, Interval(edge - js / 2, edge + js / 2)).quotient
        affine_qs = []
        for c in np.linspace(as_, 1 - as_, 40):
            r = osc(u, Interval(c - as_ / 2, c + as_ / 2))
            if r.quotient is not None:
                affine_qs.append(r.quotient)
        assert jump_q > max(affine_qs)
        assert jump_q > 0.45
