"""Local Poincare constants, unit-cube rescalings, tangents, and rigidity diagnostics.

The rescaling of f along an oriented cube Q is
f_Q(y) = (f(T_Q y) - mean_Q f) * side^(n-1) / |Df|(Q), a zero-average
function on the unit cube with unit normalized variation.  Rescalings along
cubes shrinking onto a point x (with x constrained to the tau-contraction
of each cube) are blow-up sequences; their L1 limit points are the
tau-tangents of f at x.

P(x, eps) is the supremum of the Poincare quotient over cubes with
x in tau*Q and sidelength <= eps, scanned here over a finite candidate
lattice (geometric side grid, uniform center offsets); its small-eps limit
is the local constant, which the cell formula re-expresses as the largest
tangent oscillation.  Candidate side grids share an absolute floor across
an eps schedule so that candidate sets are nested and lattice profiles
inherit the monotonicity of the true suprema.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bvfunction import BVFunction1D, PiecewiseBV
from .errors import DomainError, NotConvergedError, ZeroVariationError
from .function2d import Function2D
from .geometry import Cube, Interval, interval_as_cube, unit_cube
from .oscillation import osc as osc_stats
from .oscillation import total_variation

GRID_1D = 512
GRID_2D = 128
GAP_TOL = 1e-3


# -- rescaling ---------------------------------------------------------------


@dataclass(frozen=True)
class TangentCandidate:
    """A rescaled function on the unit cube, sampled on a fixed grid."""

    samples: np.ndarray
    source_cubes: tuple[Cube, ...]
    l1_cauchy_gap: float
    osc: float
    tv_estimate: float
    converged: bool
    dim: int
    exact_1d: PiecewiseBV | None = None
    exact_2d: Function2D | None = None

    @property
    def mean(self) -> float:
        return float(self.samples.mean())


def _grid_1d(n: int = GRID_1D) -> np.ndarray:
    return -0.5 + (np.arange(n) + 0.5) / n


def _grid_2d(n: int = GRID_2D):
    g = -0.5 + (np.arange(n) + 0.5) / n
    return np.meshgrid(g, g, indexing="ij")


def _as_cube(Q) -> Cube:
    return interval_as_cube(Q) if isinstance(Q, Interval) else Q


def rescale(f, Q, grid_points: int | None = None) -> TangentCandidate:
    """Zero-mean, unit-variation rescaling of f pulled back from Q to the unit cube.

    Exact for 1D representations and the structured 2D kinds; the smooth 2D
    kind is normalized with quadrature statistics and returned sample-only.
    Accepts a previous rescaling (exact candidate or compiled function), so
    blow-ups compose: rescale(rescale(f, Q), S) equals rescale(f, T_Q(S)).
    """
    cube = _as_cube(Q)
    if isinstance(f, TangentCandidate):
        inner = f.exact_1d if f.dim == 1 else f.exact_2d
        if inner is None:
            raise ValueError("cannot rescale a sample-only tangent candidate")
        return rescale(inner, cube, grid_points)
    if isinstance(f, (BVFunction1D, PiecewiseBV)):
        # use the interval endpoints directly; the center/side roundtrip can
        # move boundary-adjacent atoms across the open-interval edge
        iv = Q if isinstance(Q, Interval) else cube.as_interval()
        src = f.piecewise if isinstance(f, BVFunction1D) else f
        if not src.domain.contains(iv):
            raise DomainError("rescaling cube outside the function domain")
        pw = src.restrict(iv.a, iv.b)
        tv = pw.variation(iv.a, iv.b)
        if tv <= 0:
            raise ZeroVariationError("|Df|(Q) = 0: rescaling undefined")
        mean = pw.mean(iv.a, iv.b)
        g = pw.pullback_unit(flip=cube.axis_flip[0]).affine_values(1.0 / tv, -mean / tv)
        ys = _grid_1d(grid_points or GRID_1D)
        return TangentCandidate(
            samples=g.values(ys), source_cubes=(cube,), l1_cauchy_gap=math.inf,
            osc=g.oscillation(-0.5, 0.5)[1], tv_estimate=g.variation(-0.5, 0.5),
            converged=False, dim=1, exact_1d=g,
        )
    if isinstance(f, Function2D):
        exact = f.rescaled(cube)
        n = grid_points or GRID_2D
        X, Y = _grid_2d(n)
        if exact is not None:
            stats = exact.exact_stats(unit_cube(2))
            return TangentCandidate(
                samples=exact.values(X, Y), source_cubes=(cube,),
                l1_cauchy_gap=math.inf, osc=stats[1], tv_estimate=stats[2],
                converged=False, dim=2, exact_2d=exact,
            )
        mean, _, _ = f.quad_stats(cube)
        tv, _ = f.quad_tv(cube)
        if tv <= 0:
            raise ZeroVariationError("|Df|(Q) = 0: rescaling undefined")
        sx, sy = cube.signs
        vals = f.values(cube.center[0] + cube.side * sx * X,
                        cube.center[1] + cube.side * sy * Y)
        samples = (vals - mean) * cube.side / tv
        m = samples.mean()
        return TangentCandidate(
            samples=samples, source_cubes=(cube,), l1_cauchy_gap=math.inf,
            osc=float(np.abs(samples - m).mean()), tv_estimate=1.0,
            converged=False, dim=2,
        )
    raise TypeError(f"unsupported function type {type(f).__name__}")


# -- candidate scans ----------------------------------------------------------


@dataclass(frozen=True)
class ScanLattice:
    """Finite candidate set for the quotient supremum at one scale."""

    centers_per_axis: int = 21
    sides_per_eps: int = 4
    side_ratio: float = 0.5

    def sides(self, eps: float, floor: float | None = None) -> list[float]:
        if floor is None:
            floor = eps * self.side_ratio ** (self.sides_per_eps - 1)
        out, s = [], eps
        while s >= floor * (1 - 1e-12):
            out.append(s)
            s *= self.side_ratio
        return out


def _candidate_cubes(f, x, tau: float, eps: float, lattice: ScanLattice,
                     floor: float | None = None):
    """Cubes with x in tau*Q, side <= eps, inside the domain, on the scan lattice."""
    dim = 1 if isinstance(f, BVFunction1D) else 2
    xs = (x,) if np.isscalar(x) else tuple(x)
    for side in lattice.sides(eps, floor):
        reach = 0.5 * tau * side
        offs = np.linspace(-reach, reach, lattice.centers_per_axis) if tau > 0 \
            else np.asarray([0.0])
        if dim == 1:
            for o in offs:
                iv = Interval(xs[0] + o - 0.5 * side, xs[0] + o + 0.5 * side)
                if f.domain.contains(iv):
                    yield interval_as_cube(iv)
        else:
            for ox in offs:
                for oy in offs:
                    yield Cube((xs[0] + ox, xs[1] + oy), side)


@dataclass(frozen=True)
class PTauResult:
    value: float
    cube: Cube | None
    in_support: bool


def p_tau(f, x, tau: float, eps: float, lattice: ScanLattice | None = None,
          side_floor: float | None = None) -> PTauResult:
    """Largest Poincare quotient over the candidate lattice at scale eps."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError("tau must lie in [0, 1]")
    lattice = lattice or ScanLattice()
    best, best_cube = 0.0, None
    found_variation = False
    for cube in _candidate_cubes(f, x, tau, eps, lattice, side_floor):
        Q = cube.as_interval() if cube.dim == 1 else cube
        stats = osc_stats(f, Q)
        if stats.quotient is None:
            continue
        found_variation = True
        if stats.quotient > best:
            best, best_cube = stats.quotient, cube
    if not found_variation:
        return PTauResult(0.0, None, False)
    return PTauResult(best, best_cube, True)


@dataclass(frozen=True)
class PoincareProfile:
    """P(x, eps) along a decreasing eps schedule, plus the small-scale estimate."""

    x: object
    tau: float
    samples: tuple[tuple[float, float, Cube | None], ...]
    p_estimate: float
    in_support: bool
    log_slope: float

    def values(self) -> list[float]:
        return [v for _, v, _ in self.samples]


def p_profile(f, x, tau: float, eps_schedule, lattice: ScanLattice | None = None
              ) -> PoincareProfile:
    """Scan P(x, eps) along the schedule; the estimate is the last (smallest-eps) value."""
    eps_list = list(eps_schedule)
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_schedule must be strictly decreasing")
    lattice = lattice or ScanLattice()
    floor = min(eps_list) * lattice.side_ratio ** (lattice.sides_per_eps - 1)
    samples = []
    last = PTauResult(0.0, None, False)
    for eps in eps_list:
        last = p_tau(f, x, tau, eps, lattice, side_floor=floor)
        samples.append((eps, last.value, last.cube))
    vals = [v for _, v, _ in samples]
    if len(vals) >= 2 and vals[0] != vals[-1]:
        logs = np.log([e for e, _, _ in samples])
        slope = float(np.polyfit(logs, vals, 1)[0])
    else:
        slope = 0.0
    return PoincareProfile(
        x=x, tau=tau, samples=tuple(samples),
        p_estimate=last.value if last.in_support else 0.0,
        in_support=last.in_support, log_slope=slope,
    )


# -- tangents -----------------------------------------------------------------


def _grid_l1(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.abs(a - b).mean())


def extract_tangent(f, x, tau: float, cube_sequence, grid_points: int | None = None,
                    gap_tol: float = GAP_TOL) -> TangentCandidate:
    """Rescale along a shrinking cube sequence and report the Cauchy gap.

    The candidate is marked converged when the final consecutive L1 gap on
    the sample grid drops below ``gap_tol``; otherwise the best gap is
    reported and no convergence is claimed.
    """
    cubes = [_as_cube(Q) for Q in cube_sequence]
    if not cubes:
        raise ValueError("cube_sequence must be non-empty")
    xs = (x,) if np.isscalar(x) else tuple(x)
    for Q in cubes:
        if tau > 0 and not Q.shrink(tau).contains_point(xs, tol=1e-9):
            raise DomainError(f"x not in tau*Q for cube centered at {Q.center}")
    if any(b.side > a.side + 1e-12 for a, b in zip(cubes, cubes[1:])):
        raise ValueError("cube sides must be nonincreasing")
    prev = None
    gap = math.inf
    cand = None
    for Q in cubes:
        cand = rescale(f, Q, grid_points)
        if prev is not None:
            gap = _grid_l1(cand.samples, prev)
        prev = cand.samples
    return TangentCandidate(
        samples=cand.samples, source_cubes=tuple(cubes), l1_cauchy_gap=gap,
        osc=cand.osc, tv_estimate=cand.tv_estimate,
        converged=bool(gap < gap_tol), dim=cand.dim,
        exact_1d=cand.exact_1d, exact_2d=cand.exact_2d,
    )


def centered_cube_sequence(x, side0: float, ratio: float = 0.5, count: int = 8,
                           offset_frac=0.0, dim: int = 1) -> list[Cube]:
    """Shrinking cubes around x; offset_frac places x off-center (fraction of the side)."""
    xs = (x,) if np.isscalar(x) else tuple(x)
    offs = (offset_frac,) * dim if np.isscalar(offset_frac) else tuple(offset_frac)
    out = []
    side = side0
    for _ in range(count):
        center = tuple(xi - o * side for xi, o in zip(xs, offs))
        out.append(Cube(center, side))
        side *= ratio
    return out


@dataclass(frozen=True)
class CellFormulaReport:
    """Quotient supremum vs oscillation of the tangent extracted along its argmax cubes."""

    p_value: float
    best_tangent_osc: float
    gap: float
    in_support: bool
    tangent: TangentCandidate | None
    eps_schedule: tuple[float, ...]


def cell_formula_check(f, x, tau: float, eps: float,
                       lattice: ScanLattice | None = None, levels: int = 6,
                       ratio: float = 0.5, grid_points: int | None = None
                       ) -> CellFormulaReport:
    """Compare P(x, eps_min) with the oscillation of the argmax-cube tangent."""
    lattice = lattice or ScanLattice()
    eps_list = [eps * ratio ** k for k in range(levels)]
    floor = eps_list[-1] * lattice.side_ratio ** (lattice.sides_per_eps - 1)
    argmax_cubes: list[Cube] = []
    p_value = 0.0
    in_support = False
    for e in eps_list:
        res = p_tau(f, x, tau, e, lattice, side_floor=floor)
        if res.in_support and res.cube is not None:
            argmax_cubes.append(res.cube)
            p_value, in_support = res.value, True
    if not in_support:
        return CellFormulaReport(0.0, 0.0, 0.0, False, None, tuple(eps_list))
    argmax_cubes.sort(key=lambda c: -c.side)
    tangent = extract_tangent(f, x, tau, argmax_cubes, grid_points)
    gap = abs(p_value - tangent.osc)
    return CellFormulaReport(p_value, tangent.osc, gap, True, tangent, tuple(eps_list))


def tangent_packing_value(candidate: TangentCandidate, eps: float = 0.25,
                          steps: int = 8) -> float:
    """Packing value of an exact tangent over the unit cube (exploratory).

    Measures how much packed oscillation the tangent itself supports; no
    identity between this number and the local constant is asserted.
    """
    from .packing import PackingProblem, solve_1d

    if candidate.dim != 1 or candidate.exact_1d is None:
        raise ValueError("self-packing needs an exact 1D tangent")
    g = candidate.exact_1d

    class _Wrapper:
        piecewise = g
        domain = g.domain

    f = BVFunction1D(domain=Interval(-0.5, 0.5))
    object.__setattr__(f, "_pw", g)
    prob = PackingProblem(f=f, domain=Interval(-0.5, 0.5), mode="geps",
                          eps=eps, lattice_step=eps / steps)
    return solve_1d(prob).value


# -- rigidity ------------------------------------------------------------------


@dataclass(frozen=True)
class JumpTemplate:
    """Axis-normal jump on the unit cube with zero mean and unit variation."""

    axis: int
    sign: float
    offset: float  # hyperplane position in unit-cube coordinates

    def values_1d(self, ys: np.ndarray) -> np.ndarray:
        step = np.where(ys > self.offset, 1.0, 0.0)
        return self.sign * (step - (0.5 - self.offset))

    def values_2d(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        coord = X if self.axis == 0 else Y
        step = np.where(coord > self.offset, 1.0, 0.0)
        return self.sign * (step - (0.5 - self.offset))


@dataclass(frozen=True)
class RigidityReport:
    kind: str  # jump_halfcube | linear | other
    fit_error: float
    jump_template: JumpTemplate | None
    max_subcube_quotient: float | None
    quarter_bound_ok: bool | None


def _subcube_quotients(cand: TangentCandidate, tau: float,
                       sides=(0.5, 0.25, 0.125), centers: int = 9) -> float:
    """Max quotient over a sub-cube lattice restricted to tau*Q touching spt|Du|."""
    best = 0.0
    if cand.dim == 1:
        g = cand.exact_1d
        for side in sides:
            for c in np.linspace(-0.5 + side / 2, 0.5 - side / 2, centers):
                a, b = c - side / 2, c + side / 2
                core = Interval(c - tau * side / 2, c + tau * side / 2)
                if g.variation(core.a, core.b) <= 0:
                    continue
                tv = g.variation(a, b)
                if tv <= 0:
                    continue
                best = max(best, g.oscillation(a, b)[1] / tv)
        return best
    g2 = cand.exact_2d
    for side in sides:
        for cx in np.linspace(-0.5 + side / 2, 0.5 - side / 2, centers):
            for cy in np.linspace(-0.5 + side / 2, 0.5 - side / 2, centers):
                Q = Cube((cx, cy), side)
                if total_variation(g2, Q.shrink(tau)) <= 0:
                    continue
                stats = osc_stats(g2, Q)
                if stats.quotient is not None:
                    best = max(best, stats.quotient)
    return best


def rigidity_diagnose(candidate: TangentCandidate, tau: float = 0.9,
                      fit_tol: float = 0.05, offsets: int = 101,
                      quarter_tol: float = 1e-6) -> RigidityReport:
    """Classify a converged tangent against axis jump templates and linear maps.

    The best L1 fit decides the class; for non-jump candidates with an exact
    form, sub-cube quotients are scanned against the 1/4 bound that rigidity
    at the minimal constant demands.
    """
    if not candidate.converged:
        raise NotConvergedError("rigidity diagnosis needs a converged tangent")
    u = candidate.samples
    offs = np.linspace(-tau / 2, tau / 2, offsets)
    best_jump, best_jump_err = None, math.inf
    best_lin_err = math.inf
    if candidate.dim == 1:
        ys = _grid_1d(len(u))
        for sign in (1.0, -1.0):
            err = float(np.abs(u - sign * ys).mean())
            best_lin_err = min(best_lin_err, err)
            for c in offs:
                t = JumpTemplate(0, sign, float(c))
                err = float(np.abs(u - t.values_1d(ys)).mean())
                if err < best_jump_err:
                    best_jump, best_jump_err = t, err
    else:
        n = u.shape[0]
        X, Y = _grid_2d(n)
        for axis, coord in ((0, X), (1, Y)):
            for sign in (1.0, -1.0):
                err = float(np.abs(u - sign * coord).mean())
                best_lin_err = min(best_lin_err, err)
                for c in offs:
                    t = JumpTemplate(axis, sign, float(c))
                    err = float(np.abs(u - t.values_2d(X, Y)).mean())
                    if err < best_jump_err:
                        best_jump, best_jump_err = t, err
    if best_jump_err <= min(best_lin_err, fit_tol):
        return RigidityReport("jump_halfcube", best_jump_err, best_jump, None, None)
    sub_q = None
    quarter_ok = None
    if candidate.exact_1d is not None or candidate.exact_2d is not None:
        sub_q = _subcube_quotients(candidate, tau)
        quarter_ok = sub_q <= 0.25 + quarter_tol
    if best_lin_err <= fit_tol:
        return RigidityReport("linear", best_lin_err, None, sub_q, quarter_ok)
    return RigidityReport("other", min(best_lin_err, best_jump_err), None,
                          sub_q, quarter_ok)


# -- modified Poincare-Wirtinger ------------------------------------------------


@dataclass(frozen=True)
class ModifiedPoincareReport:
    lhs: float
    rhs: float
    holds: bool
    constant: float
    l1_substituted_for_sobolev: bool = True


def poincare_constant(n: int, tau: float) -> float:
    """C(n, tau) = C(n) + (sqrt(n)/2) (1 - tau) / tau^(n+1), with C(n) = 1/2.

    The 1/2 is the sharp cube constant of the L1-normalized inequality; the
    check below runs in that normalization (flagged on the report).
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    return 0.5 + 0.5 * math.sqrt(n) * (1.0 - tau) / tau ** (n + 1)


def modified_poincare_check(f, Q, tau: float, order: int = 256
                            ) -> ModifiedPoincareReport:
    """Check side^(n-1) * avg_Q |f - mean_{tau Q} f| <= C(n, tau) |Df|(Q)."""
    cube = _as_cube(Q)
    n = cube.dim
    C = poincare_constant(n, tau)
    if isinstance(f, BVFunction1D):
        iv = cube.as_interval()
        core = iv.shrink(tau)
        m = f.piecewise.mean(core.a, core.b)
        lhs = f.piecewise.abs_dev_integral(iv.a, iv.b, m) / iv.length
        tv = f.piecewise.variation(iv.a, iv.b)
    else:
        core = cube.shrink(tau)
        ex = f.exact_stats(core)
        m = ex[0] if ex is not None else f.quad_stats(core, order)[0]
        ex_full = f.exact_stats(cube)
        if ex_full is not None and type(f).__name__ in ("HalfplaneIndicator",
                                                        "PolygonIndicator"):
            # two-valued f: avg |f - m| has a closed form via the area fraction
            phi = (ex_full[0] - f.low) / (f.high - f.low)
            lhs = cube.side * ((1 - phi) * abs(f.low - m) + phi * abs(f.high - m))
            tv = ex_full[2]
        else:
            ex_q, ey_q, mx, my = f._grids(cube, order)
            MX, MY = np.meshgrid(mx, my, indexing="ij")
            lhs = cube.side * float(np.abs(f.values(MX, MY) - m).mean())
            tv = ex_full[2] if ex_full is not None else f.quad_tv(cube, order)[0]
    rhs = C * tv
    return ModifiedPoincareReport(lhs, rhs, lhs <= rhs + 1e-9, C)
