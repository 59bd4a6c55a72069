"""Exact 1D BV representations: piecewise-affine density, jump atoms, Cantor approximant.

Everything on this path is closed form.  A function is compiled once into a
node/slope/jump table with prefix sums, after which means, total variation,
and mean oscillation over any open subinterval are exact up to float
rounding (no quadrature).

The derivative decomposes as: absolutely continuous part = segment slopes
(the finite-depth Cantor approximant only adds more slope segments), jump
part = atoms.  Open-interval convention throughout: atoms sitting exactly
on an endpoint of the queried interval carry no mass there.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np

from .cantor import CantorSpec, stage_nodes_slopes
from .errors import DomainError, SpecFormatError
from .geometry import Interval

_EPS = 1e-12


def _abs_linear_integral(length: float, fu: float, fv: float) -> float:
    """Integral of |t -> linear from fu to fv| over a segment of given length."""
    if fu >= 0.0 and fv >= 0.0:
        return 0.5 * (fu + fv) * length
    if fu <= 0.0 and fv <= 0.0:
        return -0.5 * (fu + fv) * length
    # sign change inside: two triangles
    afu, afv = abs(fu), abs(fv)
    return 0.5 * length * (fu * fu + fv * fv) / (afu + afv)


class PiecewiseBV:
    """Compiled piecewise-affine + atoms function on an interval.

    nodes[0]..nodes[-1] is the domain; ``slopes[i]`` rules (nodes[i], nodes[i+1]);
    ``jumps[i]`` is the atom sitting at nodes[i] (first and last are zero);
    ``offset`` is the value just right of the left endpoint.
    """

    __slots__ = (
        "nodes", "slopes", "jumps", "offset",
        "_vright", "_pref_int", "_pref_abs_slope", "_pref_abs_jump", "_nodes_arr",
    )

    def __init__(self, nodes, slopes, jumps, offset=0.0):
        self.nodes = [float(x) for x in nodes]
        self.slopes = [float(s) for s in slopes]
        self.jumps = [float(j) for j in jumps]
        self.offset = float(offset)
        n = len(self.nodes)
        if n < 2 or len(self.slopes) != n - 1 or len(self.jumps) != n:
            raise ValueError("inconsistent piecewise table")
        vright = [0.0] * n
        pref_int = [0.0] * n
        pref_abs_slope = [0.0] * n
        pref_abs_jump = [0.0] * n
        vright[0] = self.offset
        for i in range(n - 1):
            dx = self.nodes[i + 1] - self.nodes[i]
            if dx <= 0:
                raise ValueError("nodes must be strictly increasing")
            vleft = vright[i] + self.slopes[i] * dx
            pref_int[i + 1] = pref_int[i] + 0.5 * (vright[i] + vleft) * dx
            pref_abs_slope[i + 1] = pref_abs_slope[i] + abs(self.slopes[i]) * dx
            pref_abs_jump[i + 1] = pref_abs_jump[i] + abs(self.jumps[i + 1])
            vright[i + 1] = vleft + self.jumps[i + 1]
        self._vright = vright
        self._pref_int = pref_int
        self._pref_abs_slope = pref_abs_slope
        self._pref_abs_jump = pref_abs_jump
        self._nodes_arr = np.asarray(self.nodes)

    # -- basic queries ------------------------------------------------------

    @property
    def domain(self) -> Interval:
        return Interval(self.nodes[0], self.nodes[-1])

    def _seg_index(self, x: float) -> int:
        i = bisect_right(self.nodes, x) - 1
        return min(max(i, 0), len(self.slopes) - 1)

    def value(self, x: float) -> float:
        """f(x); at an atom location this returns the right limit."""
        i = self._seg_index(x)
        return self._vright[i] + self.slopes[i] * (x - self.nodes[i])

    def values(self, xs: np.ndarray) -> np.ndarray:
        idx = np.clip(np.searchsorted(self._nodes_arr, xs, side="right") - 1,
                      0, len(self.slopes) - 1)
        vr = np.asarray(self._vright)[idx]
        sl = np.asarray(self.slopes)[idx]
        return vr + sl * (xs - self._nodes_arr[idx])

    def _check_sub(self, alpha: float, beta: float) -> None:
        if beta <= alpha:
            raise DomainError(f"empty interval ({alpha}, {beta})")
        if alpha < self.nodes[0] - _EPS or beta > self.nodes[-1] + _EPS:
            raise DomainError(
                f"({alpha}, {beta}) not contained in domain "
                f"({self.nodes[0]}, {self.nodes[-1]})"
            )

    def integral(self, alpha: float, beta: float) -> float:
        self._check_sub(alpha, beta)
        nodes, slopes, vright, pref = self.nodes, self.slopes, self._vright, self._pref_int
        ia, ib = self._seg_index(alpha), self._seg_index(beta)
        fa = vright[ia] + slopes[ia] * (alpha - nodes[ia])
        fb = vright[ib] + slopes[ib] * (beta - nodes[ib])
        if ia == ib:
            return 0.5 * (fa + fb) * (beta - alpha)
        head = 0.5 * (fa + (vright[ia] + slopes[ia] * (nodes[ia + 1] - nodes[ia]))) \
            * (nodes[ia + 1] - alpha)
        tail = 0.5 * (vright[ib] + fb) * (beta - nodes[ib])
        return head + (pref[ib] - pref[ia + 1]) + tail

    def mean(self, alpha: float, beta: float) -> float:
        return self.integral(alpha, beta) / (beta - alpha)

    def variation(self, alpha: float, beta: float) -> float:
        """|Df|((alpha, beta)): slope mass plus atoms strictly inside."""
        self._check_sub(alpha, beta)
        nodes, slopes = self.nodes, self.slopes
        ia, ib = self._seg_index(alpha), self._seg_index(beta)
        if ia == ib:
            ac = abs(slopes[ia]) * (beta - alpha)
        else:
            ac = abs(slopes[ia]) * (nodes[ia + 1] - alpha) \
                + (self._pref_abs_slope[ib] - self._pref_abs_slope[ia + 1]) \
                + abs(slopes[ib]) * (beta - nodes[ib])
        # atoms at nodes j with alpha < nodes[j] < beta
        lo = bisect_right(nodes, alpha)
        hi = bisect_left(nodes, beta)
        jm = self._pref_abs_jump[hi - 1] - self._pref_abs_jump[lo - 1] if hi > lo else 0.0
        return ac + jm

    def abs_dev_integral(self, alpha: float, beta: float, m: float) -> float:
        """Integral of |f - m| over (alpha, beta)."""
        self._check_sub(alpha, beta)
        nodes, slopes, vright = self.nodes, self.slopes, self._vright
        total = 0.0
        i = self._seg_index(alpha)
        u = alpha
        fu = vright[i] + slopes[i] * (u - nodes[i]) - m
        while True:
            v = nodes[i + 1] if i + 1 < len(nodes) else beta
            if v >= beta:
                v = beta
                fv = vright[i] + slopes[i] * (v - nodes[i]) - m
                total += _abs_linear_integral(v - u, fu, fv)
                break
            fv = vright[i] + slopes[i] * (v - nodes[i]) - m
            total += _abs_linear_integral(v - u, fu, fv)
            i += 1
            u = v
            fu = vright[i] - m  # value right of the node (after any atom)
        return total

    def oscillation(self, alpha: float, beta: float) -> tuple[float, float]:
        """(mean, Osc) over (alpha, beta); Osc is the averaged L1 deviation."""
        m = self.mean(alpha, beta)
        return m, self.abs_dev_integral(alpha, beta, m) / (beta - alpha)

    def sup_abs(self) -> float:
        """Exact sup |f| over the domain (attained at a node or one-sided limit)."""
        best = 0.0
        for i in range(len(self.slopes)):
            dx = self.nodes[i + 1] - self.nodes[i]
            vleft = self._vright[i] + self.slopes[i] * dx
            best = max(best, abs(self._vright[i]), abs(vleft))
        return best

    # -- structural transforms ---------------------------------------------

    @staticmethod
    def _merged(nodes, slopes, jumps, offset, min_dx=1e-15):
        """Collapse segments shorter than min_dx of the span; their rise becomes a jump.

        Mass is conserved exactly (rise slope*dx turns into an atom at the
        merged node), which keeps rescalings of near-degenerate segments sound.
        """
        span = nodes[-1] - nodes[0]
        floor = min_dx * max(span, 1.0)
        out_nodes = [nodes[0]]
        out_slopes: list[float] = []
        out_jumps = [jumps[0]]
        pending = 0.0
        for i in range(len(slopes)):
            dx = nodes[i + 1] - nodes[i]
            if dx <= floor and i + 1 < len(nodes) - 1:
                pending += slopes[i] * dx + jumps[i + 1]
                continue
            out_nodes.append(nodes[i + 1])
            out_slopes.append(slopes[i])
            out_jumps.append(jumps[i + 1] + pending)
            pending = 0.0
        if pending:
            out_jumps[-1] += pending
        return PiecewiseBV(out_nodes, out_slopes, out_jumps, offset)

    def restrict(self, alpha: float, beta: float) -> "PiecewiseBV":
        """Restriction to (alpha, beta); boundary atoms drop (open convention)."""
        self._check_sub(alpha, beta)
        nodes, slopes = self.nodes, self.slopes
        lo = bisect_right(nodes, alpha)
        hi = bisect_left(nodes, beta)
        new_nodes = [alpha] + nodes[lo:hi] + [beta]
        ia = self._seg_index(alpha)
        new_slopes = [slopes[ia]] + [slopes[self._seg_index(x)] for x in nodes[lo:hi]]
        new_jumps = [0.0] + self.jumps[lo:hi] + [0.0]
        off = self._vright[ia] + slopes[ia] * (alpha - nodes[ia])
        return PiecewiseBV(new_nodes, new_slopes, new_jumps, off)

    def affine_values(self, mul: float, add: float) -> "PiecewiseBV":
        """mul * f + add, same domain."""
        return PiecewiseBV(
            self.nodes,
            [mul * s for s in self.slopes],
            [mul * j for j in self.jumps],
            mul * self.offset + add,
        )

    def pullback_unit(self, flip: bool = False) -> "PiecewiseBV":
        """g(y) = f(T(y)) on (-1/2, 1/2) where T maps the unit interval onto the domain."""
        a, b = self.nodes[0], self.nodes[-1]
        ell = b - a
        c = 0.5 * (a + b)
        if not flip:
            nodes = [(x - c) / ell for x in self.nodes]
            nodes[0], nodes[-1] = -0.5, 0.5
            return self._merged(nodes, [s * ell for s in self.slopes],
                                self.jumps, self.offset)
        # y -> T(y) = c - ell*y traverses the domain right to left
        nodes = [(c - x) / ell for x in reversed(self.nodes)]
        nodes[0], nodes[-1] = -0.5, 0.5
        slopes = [-s * ell for s in reversed(self.slopes)]
        jumps = [-j for j in reversed(self.jumps)]
        off = self._vright[-1]  # f(b-) has no atom (jumps[-1] == 0)
        return self._merged(nodes, slopes, jumps, off)


def merge_nodes(f: PiecewiseBV, g: PiecewiseBV) -> list[float]:
    if abs(f.nodes[0] - g.nodes[0]) > 1e-9 or abs(f.nodes[-1] - g.nodes[-1]) > 1e-9:
        raise ValueError("functions live on different domains")
    merged = sorted(set(f.nodes) | set(g.nodes))
    merged[0], merged[-1] = f.nodes[0], f.nodes[-1]
    return merged


def l1_distance(f: PiecewiseBV, g: PiecewiseBV) -> float:
    """Exact L1 distance of two compiled functions on a common domain."""
    merged = merge_nodes(f, g)
    total = 0.0
    for u, v in zip(merged[:-1], merged[1:]):
        mid_guard = 0.5 * (u + v)
        i, j = f._seg_index(mid_guard), g._seg_index(mid_guard)
        fu = f._vright[i] + f.slopes[i] * (u - f.nodes[i]) - (g._vright[j] + g.slopes[j] * (u - g.nodes[j]))
        fv = f._vright[i] + f.slopes[i] * (v - f.nodes[i]) - (g._vright[j] + g.slopes[j] * (v - g.nodes[j]))
        total += _abs_linear_integral(v - u, fu, fv)
    return total


def sup_distance(f: PiecewiseBV, g: PiecewiseBV) -> float:
    """Exact sup |f - g| over the common domain (checked at one-sided node limits)."""
    merged = merge_nodes(f, g)
    best = 0.0
    for u, v in zip(merged[:-1], merged[1:]):
        mid_guard = 0.5 * (u + v)
        i, j = f._seg_index(mid_guard), g._seg_index(mid_guard)
        for x in (u, v):
            d = (f._vright[i] + f.slopes[i] * (x - f.nodes[i])) \
                - (g._vright[j] + g.slopes[j] * (x - g.nodes[j]))
            best = max(best, abs(d))
    return best


@dataclass(frozen=True)
class CantorPart:
    """Finite-depth Cantor approximant placed on [offset, offset + scale], amplitude 1."""

    spec: CantorSpec
    scale: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "offset", float(self.offset))


@dataclass(frozen=True)
class BVFunction1D:
    """Exact BV function on an interval.

    ``slopes`` has one entry per segment cut by ``breakpoints`` (so
    ``len(slopes) == len(breakpoints) + 1``); ``atoms`` are (location, signed
    height) jump atoms; the optional Cantor part is expanded into extra affine
    segments at compile time, so every instance stays closed form.  Value
    convention: f(left endpoint) = 0 before atoms/cantor contributions.
    """

    domain: Interval
    breakpoints: tuple[float, ...] = ()
    slopes: tuple[float, ...] = (0.0,)
    atoms: tuple[tuple[float, float], ...] = ()
    cantor_part: CantorPart | None = None

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(float(x) for x in self.breakpoints))
        object.__setattr__(self, "slopes", tuple(float(s) for s in self.slopes))
        object.__setattr__(self, "atoms", tuple((float(x), float(h)) for x, h in self.atoms))
        if len(self.slopes) != len(self.breakpoints) + 1:
            raise SpecFormatError(
                f"need {len(self.breakpoints) + 1} slopes for "
                f"{len(self.breakpoints)} breakpoints, got {len(self.slopes)}"
            )
        a, b = self.domain.a, self.domain.b
        prev = a
        for x in self.breakpoints:
            if not (a < x < b):
                raise SpecFormatError(f"breakpoint {x} outside open domain ({a}, {b})")
            if x <= prev and prev != a:
                raise SpecFormatError("breakpoints must be strictly increasing")
            prev = x
        locs = [x for x, _ in self.atoms]
        if len(set(locs)) != len(locs):
            raise SpecFormatError("atom locations must be distinct")
        for x in locs:
            if not (a < x < b):
                raise SpecFormatError(f"atom at {x} outside open domain ({a}, {b})")
        if self.cantor_part is not None:
            cp = self.cantor_part
            if cp.scale <= 0:
                raise SpecFormatError("cantor scale must be positive")
            if cp.offset < a - _EPS or cp.offset + cp.scale > b + _EPS:
                raise SpecFormatError("cantor window must sit inside the domain")
        object.__setattr__(self, "_pw", self._compile())

    # -- compilation ---------------------------------------------------------

    def _compile(self) -> PiecewiseBV:
        a, b = self.domain.a, self.domain.b
        cuts = {a, b}
        cuts.update(self.breakpoints)
        cuts.update(x for x, _ in self.atoms)
        cantor_nodes: list[float] = []
        cantor_slopes: list[float] = []
        if self.cantor_part is not None:
            cp = self.cantor_part
            base_nodes, base_slopes = stage_nodes_slopes(cp.spec)
            cantor_nodes = [cp.offset + cp.scale * t for t in base_nodes]
            cantor_slopes = [s / cp.scale for s in base_slopes]
            cuts.update(cantor_nodes)
        nodes = sorted(cuts)
        atom_at = dict(self.atoms)
        jumps = [atom_at.get(x, 0.0) for x in nodes]
        bps = list(self.breakpoints)
        slopes = []
        for u, v in zip(nodes[:-1], nodes[1:]):
            mid = 0.5 * (u + v)
            s = self.slopes[bisect_right(bps, mid)]
            if cantor_nodes:
                k = bisect_right(cantor_nodes, mid) - 1
                if 0 <= k < len(cantor_slopes):
                    s += cantor_slopes[k]
            slopes.append(s)
        return PiecewiseBV(nodes, slopes, jumps, 0.0)

    @property
    def piecewise(self) -> PiecewiseBV:
        return self._pw  # type: ignore[attr-defined]

    # -- convenience wrappers -------------------------------------------------

    def value(self, x: float) -> float:
        return self.piecewise.value(x)

    def values(self, xs: np.ndarray) -> np.ndarray:
        return self.piecewise.values(xs)

    def total_variation(self, iv: Interval | None = None) -> float:
        iv = iv or self.domain
        return self.piecewise.variation(iv.a, iv.b)

    def abs_continuous_mass(self, iv: Interval | None = None) -> float:
        """|D^a f| mass (slope part, Cantor approximant included) on an interval."""
        iv = iv or self.domain
        pw = self.piecewise
        ia, ib = pw._seg_index(iv.a), pw._seg_index(iv.b)
        if ia == ib:
            return abs(pw.slopes[ia]) * (iv.b - iv.a)
        return abs(pw.slopes[ia]) * (pw.nodes[ia + 1] - iv.a) \
            + (pw._pref_abs_slope[ib] - pw._pref_abs_slope[ia + 1]) \
            + abs(pw.slopes[ib]) * (iv.b - pw.nodes[ib])

    def jump_mass(self, iv: Interval | None = None) -> float:
        """|D^j f| mass on an open interval."""
        iv = iv or self.domain
        return sum(abs(h) for x, h in self.atoms if iv.a < x < iv.b)
