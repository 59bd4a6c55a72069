"""Disjoint-cube packing maximization of weighted mean oscillation.

Two modes: ``keps`` packs cubes of one fixed sidelength eps; ``geps`` packs
cubes of any sidelength up to eps.  The objective is the sum of
side^(n-1) * Osc(f, Q) over the family.  In 1D the maximum over a candidate
lattice is exact (maximum-weight disjoint interval scheduling, DP over
candidates sorted by right endpoint with predecessor lookup); in 2D a
greedy start plus local search gives a certified lower bound, with
(1/2) |Df|(domain) as the universal upper bound.

Candidate lattices approach the continuum supremum from below as the step
shrinks; every family reports that it was computed over axis-aligned cubes.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .bvfunction import BVFunction1D
from .errors import LatticeTooLargeError
from .function2d import Function2D
from .geometry import Cube, Interval
from .oscillation import OscResult, osc, total_variation

_TOL = 1e-9
MAX_CANDIDATES = 2_000_000


@dataclass(frozen=True)
class PackingProblem:
    """One packing instance: function, domain, mode, scale, lattice."""

    f: object
    domain: Interval | tuple[Interval, ...] | Cube
    mode: str
    eps: float
    lattice_step: float
    side_set: tuple[float, ...] = ()

    def __post_init__(self):
        if self.mode not in ("keps", "geps"):
            raise ValueError(f"mode must be 'keps' or 'geps', got {self.mode!r}")
        if self.eps <= 0 or self.lattice_step <= 0:
            raise ValueError("eps and lattice_step must be positive")
        if self.lattice_step > self.eps + _TOL:
            raise ValueError("lattice_step must not exceed eps")
        if not self.side_set:
            object.__setattr__(self, "side_set", self._default_sides())
        if any(s > self.eps + _TOL for s in self.side_set):
            raise ValueError("side_set entries must not exceed eps")

    def _default_sides(self) -> tuple[float, ...]:
        if self.mode == "keps":
            return (self.eps,)
        m = int(math.floor(self.eps / self.lattice_step + _TOL))
        return tuple(k * self.lattice_step for k in range(1, m + 1))

    @property
    def dim(self) -> int:
        return 2 if isinstance(self.domain, Cube) else 1

    def components(self) -> tuple[Interval, ...]:
        if isinstance(self.domain, Interval):
            return (self.domain,)
        if isinstance(self.domain, tuple):
            return self.domain
        raise TypeError("1D components requested for a 2D domain")


@dataclass(frozen=True)
class PackedCube:
    """One member of a packing family with its oscillation statistics."""

    cube: Interval | Cube
    stats: OscResult
    weight: float  # side^(n-1) * osc

    @property
    def side(self) -> float:
        return self.cube.length if isinstance(self.cube, Interval) else self.cube.side


@dataclass(frozen=True)
class PackingFamily:
    """Disjoint family with its value and the certified bounds."""

    cubes: tuple[PackedCube, ...]
    value: float
    lower_bound: float
    upper_bound: float
    exact: bool
    mode: str
    eps: float
    lattice_step: float
    seed: int | None = None
    axis_aligned: bool = True

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "exact": self.exact,
            "mode": self.mode,
            "eps": self.eps,
            "lattice_step": self.lattice_step,
            "seed": self.seed,
            "axis_aligned": self.axis_aligned,
            "cubes": [
                {
                    "cube": [c.cube.a, c.cube.b] if isinstance(c.cube, Interval)
                    else {"center": list(c.cube.center), "side": c.cube.side},
                    "weight": c.weight,
                    **c.stats.to_dict(),
                }
                for c in self.cubes
            ],
        }


def max_weight_disjoint(intervals: list[tuple[float, float, float, object]]
                        ) -> tuple[float, list[int]]:
    """Maximum-weight subfamily of pairwise essentially disjoint intervals.

    ``intervals`` holds (left, right, weight, payload).  Closed abutment is
    allowed: right == next left is compatible.  Ties prefer the skip branch,
    so optimal families are minimal and leftmost among equals.
    """
    order = sorted(range(len(intervals)), key=lambda k: (intervals[k][1], intervals[k][0]))
    rights = [intervals[k][1] for k in order]
    n = len(order)
    dp = [0.0] * (n + 1)
    pred = [0] * n
    for j in range(n):
        left = intervals[order[j]][0]
        pred[j] = bisect_right(rights, left + _TOL, 0, j)
        take = dp[pred[j]] + intervals[order[j]][2]
        dp[j + 1] = take if take > dp[j] else dp[j]
    chosen: list[int] = []
    j = n
    while j > 0:
        take = dp[pred[j - 1]] + intervals[order[j - 1]][2]
        if take > dp[j - 1]:
            chosen.append(order[j - 1])
            j = pred[j - 1]
        else:
            j -= 1
    chosen.reverse()
    return dp[n], chosen


def enumerate_candidates_1d(prob: PackingProblem,
                            max_candidates: int = MAX_CANDIDATES,
                            exclude: frozenset[tuple[float, float]] = frozenset(),
                            ) -> list[tuple[float, float, float, OscResult]]:
    """All admissible intervals with positive oscillation weight.

    Left endpoints sit on the global h-grid (multiples of the lattice step,
    not per-component offsets), so the candidate set of any sub-domain is a
    subset of the whole-domain set and set-function inequalities transfer
    exactly to the lattice.
    """
    f: BVFunction1D = prob.f
    h = prob.lattice_step
    count_estimate = 0
    for comp in prob.components():
        steps = int(math.floor(comp.length / h + _TOL))
        count_estimate += (steps + 1) * len(prob.side_set)
    if count_estimate > max_candidates:
        need = h * count_estimate / max_candidates
        raise LatticeTooLargeError(
            f"{count_estimate} candidates exceed the cap {max_candidates}; "
            f"coarsen lattice_step to at least {need:.3g}"
        )
    out: list[tuple[float, float, float, OscResult]] = []
    for comp in prob.components():
        i_min = math.ceil(comp.a / h - _TOL)
        for side in prob.side_set:
            i = i_min
            while True:
                left = i * h
                right = left + side
                if right > comp.b + _TOL:
                    break
                right = min(right, comp.b)
                i += 1
                if (left, right) in exclude:
                    continue
                stats = osc(f, Interval(left, right))
                if stats.osc > 1e-15:
                    out.append((left, right, stats.osc, stats))
    return out


def _upper_bound_1d(prob: PackingProblem) -> float:
    return 0.5 * sum(total_variation(prob.f, comp) for comp in prob.components())


def solve_1d(prob: PackingProblem,
             max_candidates: int = MAX_CANDIDATES,
             exclude: frozenset[tuple[float, float]] = frozenset(),
             ) -> PackingFamily:
    """Exact lattice maximum via the disjoint-interval DP."""
    cands = enumerate_candidates_1d(prob, max_candidates, exclude)
    value, chosen = max_weight_disjoint([(c[0], c[1], c[2], None) for c in cands])
    cubes = tuple(
        PackedCube(Interval(cands[k][0], cands[k][1]), cands[k][3], cands[k][2])
        for k in sorted(chosen, key=lambda k: cands[k][0])
    )
    return PackingFamily(
        cubes=cubes, value=value, lower_bound=value,
        upper_bound=_upper_bound_1d(prob), exact=True,
        mode=prob.mode, eps=prob.eps, lattice_step=prob.lattice_step,
    )


# -- 2D: greedy + local search ----------------------------------------------


def _candidates_2d(prob: PackingProblem, max_candidates: int):
    f: Function2D = prob.f
    dom: Cube = prob.domain
    h = prob.lattice_step
    centers, sides, weights, stats_list = [], [], [], []
    for side in prob.side_set:
        half = 0.5 * side
        lo = [c - 0.5 * dom.side + half for c in dom.center]
        hi = [c + 0.5 * dom.side - half for c in dom.center]
        nx = int(math.floor((hi[0] - lo[0]) / h + _TOL)) + 1 if hi[0] >= lo[0] - _TOL else 0
        ny = int(math.floor((hi[1] - lo[1]) / h + _TOL)) + 1 if hi[1] >= lo[1] - _TOL else 0
        if nx * ny * len(prob.side_set) > max_candidates:
            raise LatticeTooLargeError(
                f"2D lattice too fine ({nx}x{ny} centers per side); coarsen lattice_step"
            )
        for i in range(nx):
            for j in range(ny):
                cube = Cube((lo[0] + i * h, lo[1] + j * h), side)
                stats = osc(f, cube)
                w = side * stats.osc
                if w > 1e-15:
                    centers.append(cube.center)
                    sides.append(side)
                    weights.append(w)
                    stats_list.append(stats)
    return (np.asarray(centers).reshape(-1, 2), np.asarray(sides),
            np.asarray(weights), stats_list)


def _overlap_mask(centers, sides, cube_center, cube_side):
    lim = 0.5 * (sides + cube_side) - _TOL
    return (np.abs(centers[:, 0] - cube_center[0]) < lim) \
        & (np.abs(centers[:, 1] - cube_center[1]) < lim)


class _SearchState:
    def __init__(self, centers, sides, weights):
        self.centers, self.sides, self.weights = centers, sides, weights
        self.placed: list[int] = []
        self.blocked = np.zeros(len(weights), dtype=bool)

    def value(self) -> float:
        return float(self.weights[self.placed].sum()) if self.placed else 0.0

    def place(self, k: int) -> None:
        self.placed.append(k)
        self.blocked |= _overlap_mask(self.centers, self.sides,
                                      self.centers[k], self.sides[k])

    def rebuild_blocked(self) -> None:
        self.blocked = np.zeros(len(self.weights), dtype=bool)
        for k in self.placed:
            self.blocked |= _overlap_mask(self.centers, self.sides,
                                          self.centers[k], self.sides[k])

    def fill_greedy(self) -> None:
        while True:
            open_w = np.where(self.blocked, -np.inf, self.weights)
            k = int(open_w.argmax())
            if open_w[k] <= 0:
                return
            self.place(k)

    def remove(self, pos: int) -> int:
        k = self.placed.pop(pos)
        self.rebuild_blocked()
        return k


def _one_restart(r: int, seed: int, budget: int, centers, sides, weights
                 ) -> tuple[float, list[int]]:
    rng = np.random.default_rng(seed * 9973 + r)
    state = _SearchState(centers, sides, weights)
    if r > 0:
        # randomized start: seed a few weighted random picks before filling
        probs = weights / weights.sum()
        for k in rng.choice(len(weights), size=min(4, len(weights)),
                            replace=False, p=probs):
            if not state.blocked[int(k)]:
                state.place(int(k))
    state.fill_greedy()
    value = state.value()
    stall = 0
    for _ in range(budget):
        if not state.placed or stall > 20:
            break
        move = rng.integers(3)
        saved = list(state.placed)
        if move == 0:  # remove worst, refill
            state.remove(int(np.argmin(weights[state.placed])))
        elif move == 1:  # remove random, refill
            state.remove(int(rng.integers(len(state.placed))))
        else:  # swap: remove two random, refill
            state.remove(int(rng.integers(len(state.placed))))
            if state.placed:
                state.remove(int(rng.integers(len(state.placed))))
        state.fill_greedy()
        if state.value() > value + 1e-15:
            value = state.value()
            stall = 0
        else:
            state.placed = saved
            state.rebuild_blocked()
            stall += 1
    return value, list(state.placed)


def solve_2d(prob: PackingProblem, budget: int = 200, seed: int = 0,
             restarts: int = 8, max_candidates: int = 200_000,
             threads: int = 1) -> PackingFamily:
    """Best-effort 2D packing: greedy start, remove/insert/swap local search.

    Deterministic for a fixed (seed, restarts, budget): each restart has its
    own RNG stream and results are reduced in restart order, so the thread
    count never changes the answer.
    """
    centers, sides, weights, stats_list = _candidates_2d(prob, max_candidates)
    dom: Cube = prob.domain
    upper = 0.5 * total_variation(prob.f, dom)
    if len(weights) == 0:
        return PackingFamily((), 0.0, 0.0, upper, False, prob.mode,
                             prob.eps, prob.lattice_step, seed)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda r: _one_restart(r, seed, budget, centers, sides, weights),
                range(restarts)))
    else:
        results = [_one_restart(r, seed, budget, centers, sides, weights)
                   for r in range(restarts)]
    best_value, best_placed = -1.0, []
    for value, placed in results:
        if value > best_value + 1e-15:
            best_value, best_placed = value, placed

    order = sorted(best_placed, key=lambda k: (centers[k][0], centers[k][1]))
    cubes = tuple(
        PackedCube(Cube(tuple(centers[k]), float(sides[k])), stats_list[k],
                   float(weights[k]))
        for k in order
    )
    return PackingFamily(cubes, best_value, best_value, upper, False,
                         prob.mode, prob.eps, prob.lattice_step, seed)


def solve(prob: PackingProblem, **kwargs) -> PackingFamily:
    if prob.dim == 1:
        kwargs.pop("seed", None)
        kwargs.pop("budget", None)
        kwargs.pop("restarts", None)
        return solve_1d(prob, **kwargs)
    return solve_2d(prob, **kwargs)


# -- good families ------------------------------------------------------------


@dataclass(frozen=True)
class CubeCheck:
    """Near-optimality conditions for one cube of a family."""

    cube: Interval | Cube
    quotient: float
    oscillation_ok: bool    # weight >= (1/8) |Df|(Q)
    core_mass_ok: bool      # |Df|(tau Q) >= (1/16) |Df|(Q)

    @property
    def ok(self) -> bool:
        return self.oscillation_ok and self.core_mass_ok


def good_family_check(fam: PackingFamily, f, tau: float = 0.9) -> list[CubeCheck]:
    """Flag cubes violating the near-optimal family conditions."""
    out = []
    for pc in fam.cubes:
        tv = pc.stats.tv
        q = pc.stats.quotient if pc.stats.quotient is not None else 0.0
        shrunk = pc.cube.shrink(tau)
        tv_core = total_variation(f, shrunk)
        out.append(CubeCheck(
            cube=pc.cube,
            quotient=q,
            oscillation_ok=pc.weight >= tv / 8.0 - _TOL,
            core_mass_ok=tv_core >= tv / 16.0 - _TOL,
        ))
    return out


def prune_and_resolve(prob: PackingProblem, tau: float = 0.9, rounds: int = 3,
                      **solve_kwargs) -> tuple[PackingFamily, list[CubeCheck]]:
    """Iteratively drop condition-violating cubes from the candidate pool and re-solve.

    The returned family satisfies both good-family conditions cube by cube;
    pruning trades away at most the pruned cubes' weight.
    """
    exclude: set[tuple[float, float]] = set()
    fam = solve(prob, **solve_kwargs)
    for _ in range(rounds):
        checks = good_family_check(fam, prob.f, tau)
        bad = [c for c in checks if not c.ok]
        if not bad:
            return fam, checks
        if prob.dim != 1:
            break
        for c in bad:
            exclude.add((c.cube.a, c.cube.b))
        fam = solve_1d(prob, exclude=frozenset(exclude),
                       **{k: v for k, v in solve_kwargs.items()
                          if k == "max_candidates"})
    checks = good_family_check(fam, prob.f, tau)
    keep = [pc for pc, c in zip(fam.cubes, checks) if c.ok]
    value = sum(pc.weight for pc in keep)
    fam = PackingFamily(tuple(keep), value, value, fam.upper_bound, fam.exact,
                        fam.mode, fam.eps, fam.lattice_step, fam.seed)
    return fam, [c for c in good_family_check(fam, prob.f, tau)]


# -- sweeps -------------------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    eps: float
    value: float
    lower_bound: float
    upper_bound: float


def g_sweep(f, domain, eps_list, steps_per_eps: int = 16,
            mode: str = "geps", **solve_kwargs) -> list[SweepPoint]:
    """Packing values along a decreasing eps schedule (lattice step = eps / steps_per_eps)."""
    eps_list = list(eps_list)
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly decreasing")
    out = []
    for eps in eps_list:
        prob = PackingProblem(f=f, domain=domain, mode=mode, eps=eps,
                              lattice_step=eps / steps_per_eps)
        fam = solve(prob, **solve_kwargs)
        out.append(SweepPoint(eps, fam.value, fam.lower_bound, fam.upper_bound))
    return out
