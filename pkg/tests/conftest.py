"""Shared oracles and generators for the test suite.

The Riemann oracle and the subset-search packing oracle are deliberately
independent of the library's closed-form / DP code paths.
"""

import numpy as np
import pytest

from bvosc import BVFunction1D, Interval


def random_bv_function(rng, a=-1.0, b=1.0, max_breaks=4, max_atoms=3):
    """Random piecewise-affine function with jump atoms on (a, b)."""
    n_breaks = int(rng.integers(0, max_breaks + 1))
    width = b - a
    breaks = np.sort(rng.uniform(a + 0.05 * width, b - 0.05 * width, size=n_breaks))
    breaks = np.unique(np.round(breaks, 9))
    slopes = rng.uniform(-3.0, 3.0, size=len(breaks) + 1)
    n_atoms = int(rng.integers(0, max_atoms + 1))
    locs = []
    while len(locs) < n_atoms:
        x = round(float(rng.uniform(a + 0.05 * width, b - 0.05 * width)), 9)
        if x not in locs:
            locs.append(x)
    heights = rng.uniform(-2.0, 2.0, size=len(locs))
    atoms = tuple((x, float(h)) for x, h in zip(locs, heights) if abs(h) > 1e-6)
    return BVFunction1D(domain=Interval(a, b), breakpoints=tuple(breaks),
                        slopes=tuple(slopes), atoms=atoms)


def random_subinterval(rng, domain: Interval, min_frac=0.02) -> Interval:
    L = domain.length
    width = float(rng.uniform(min_frac * L, 0.9 * L))
    left = float(rng.uniform(domain.a, domain.b - width))
    return Interval(left, left + width)


def riemann_osc(f, a, b, n=20000):
    """(mean, osc) by midpoint Riemann sums; error O((b - a)/n)."""
    xs = a + (np.arange(n) + 0.5) * (b - a) / n
    vals = f.values(xs)
    m = vals.mean()
    return float(m), float(np.abs(vals - m).mean())


def subset_search_max_disjoint(cands, tol=1e-9):
    """Exhaustive take/skip search over all disjoint subfamilies.

    cands: list of (left, right, weight).  Independent of the DP: plain
    recursion over candidates sorted by left endpoint.
    """
    cands = sorted(cands, key=lambda c: (c[0], c[1]))
    n = len(cands)

    def go(i, frontier):
        if i == n:
            return 0.0
        best = go(i + 1, frontier)
        left, right, w = cands[i]
        if left >= frontier - tol:
            best = max(best, w + go(i + 1, right))
        return best

    return go(0, -np.inf)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
