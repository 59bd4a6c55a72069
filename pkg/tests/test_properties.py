"""Property-based invariants over randomized functions, cubes, and transforms."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bvosc import BVFunction1D, Cube, HalfplaneIndicator, Interval, osc, total_variation
from bvosc.localpc import rescale
from bvosc.packing import max_weight_disjoint

# slopes and heights at desk scale: exactly zero or bounded away from zero,
# so variation never lands at denormal magnitudes where quotients are noise
nonzero = st.floats(min_value=1e-3, max_value=3.0).flatmap(
    lambda m: st.sampled_from([m, -m]))
finite = st.one_of(st.just(0.0), nonzero)
coords = st.floats(min_value=-0.87, max_value=0.87).map(lambda x: round(x, 3))


@st.composite
def bv_functions(draw):
    n_breaks = draw(st.integers(0, 3))
    breaks = sorted(draw(st.lists(coords, min_size=n_breaks,
                                  max_size=n_breaks, unique=True)))
    slopes = draw(st.lists(finite, min_size=n_breaks + 1, max_size=n_breaks + 1))
    n_atoms = draw(st.integers(0, 2))
    locs = draw(st.lists(coords, min_size=n_atoms, max_size=n_atoms, unique=True))
    heights = draw(st.lists(nonzero, min_size=n_atoms, max_size=n_atoms))
    return BVFunction1D(domain=Interval(-1, 1), breakpoints=tuple(breaks),
                        slopes=tuple(slopes), atoms=tuple(zip(locs, heights)))


@st.composite
def subintervals(draw):
    a = round(draw(st.floats(min_value=-1.0, max_value=0.8)), 3)
    width = round(draw(st.floats(min_value=0.05, max_value=1.5)), 3)
    return Interval(a, min(a + max(width, 0.05), 1.0 - 1e-9))


@given(bv_functions(), subintervals())
@settings(max_examples=150, deadline=None)
def test_poincare_bound_holds(f, iv):
    r = osc(f, iv)
    assert r.osc >= 0
    assert r.tv >= 0
    if r.quotient is not None:
        assert r.quotient <= 0.5 + 1e-9


@given(bv_functions(), subintervals(), st.floats(min_value=-4, max_value=4))
@settings(max_examples=80, deadline=None)
def test_osc_absolute_homogeneity(f, iv, c):
    g = BVFunction1D(domain=f.domain, breakpoints=f.breakpoints,
                     slopes=tuple(c * s for s in f.slopes),
                     atoms=tuple((x, c * h) for x, h in f.atoms))
    assert osc(g, iv).osc == pytest.approx(abs(c) * osc(f, iv).osc,
                                           rel=1e-9, abs=1e-12)


@given(bv_functions(), subintervals(), st.floats(min_value=0.1, max_value=0.9))
@settings(max_examples=80, deadline=None)
def test_tv_splits_subadditively(f, iv, frac):
    cut = iv.a + frac * iv.length
    parts = total_variation(f, Interval(iv.a, cut)) \
        + total_variation(f, Interval(cut, iv.b))
    assert parts <= total_variation(f, iv) + 1e-12


@given(bv_functions(), subintervals())
@settings(max_examples=80, deadline=None)
def test_rescaling_normalization(f, iv):
    if total_variation(f, iv) <= 1e-9:
        return
    cand = rescale(f, iv)
    assert cand.exact_1d.mean(-0.5, 0.5) == pytest.approx(0.0, abs=1e-8)
    assert cand.tv_estimate == pytest.approx(1.0, abs=1e-8)
    assert cand.osc <= 0.5 + 1e-9


@given(st.floats(min_value=-1, max_value=1), st.floats(min_value=0.05, max_value=1),
       st.floats(min_value=-0.4, max_value=0.4),
       st.floats(min_value=0, max_value=2 * math.pi))
@settings(max_examples=100, deadline=None)
def test_halfplane_quotient_bound(cx, side, offset, angle):
    E = HalfplaneIndicator((math.cos(angle), math.sin(angle)), offset)
    Q = Cube((cx, 0.0), side)
    r = osc(E, Q)
    if r.quotient is not None:
        assert r.quotient <= 0.5 + 1e-9
        assert r.osc <= 0.5 * r.tv / Q.side + 1e-9


@given(st.lists(st.tuples(st.floats(min_value=0, max_value=10),
                          st.floats(min_value=0.1, max_value=3),
                          st.floats(min_value=0, max_value=5)),
                min_size=0, max_size=12))
@settings(max_examples=60, deadline=None)
def test_dp_value_dominates_any_single(cands):
    intervals = [(left, left + w, wt, None) for left, w, wt in cands]
    value, chosen = max_weight_disjoint(intervals)
    if intervals:
        assert value >= max(c[2] for c in intervals) - 1e-12
    picked = sorted((intervals[k][0], intervals[k][1]) for k in chosen)
    for a, b in zip(picked, picked[1:]):
        assert a[1] <= b[0] + 1e-9


@given(st.integers(2, 2048))
@settings(max_examples=40, deadline=None)
def test_unit_staircase_mass(k):
    from bvosc import CantorSpec, cantor_function
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        u = cantor_function(CantorSpec(ks=(k,), depth=1))
    assert total_variation(u) == pytest.approx(1.0, abs=1e-9)
    assert u.value(1 - 1e-12) == pytest.approx(1.0, abs=1e-7)
