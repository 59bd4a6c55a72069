"""Nested-interval Cantor construction and its staircase primitives.

Stage 0 is [0, 1].  Refining a component interval I with integer k keeps k
equally spaced closed sub-intervals of length |I| / k^2 (left endpoints
spaced |I| / k, flush left).  After i refinements with k_1, ..., k_i the
stage has r_i = k_1 * ... * k_i components, each of length 1 / r_i^2, total
measure 1 / r_i.

The depth-d staircase is the primitive of the density r_d on stage d: a
continuous nondecreasing piecewise-affine function with u(0) = 0, u(1) = 1
and unit variation.  Two scale lists matter for the oscillation sweeps: at
spacing-of-components scale 1/(r_i * r_{i+1}) the staircase is jump-like,
while at the intermediate scale r_i^{-2} * k_{i+1}^{-gamma} (gamma = 1/2 by
default) it is ramp-like.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import SpecFormatError
from .geometry import Interval


@dataclass(frozen=True)
class CantorSpec:
    """Refinement integers (k_1, ..., k_d) and the working depth d."""

    ks: tuple[int, ...]
    depth: int

    def __post_init__(self):
        object.__setattr__(self, "ks", tuple(int(k) for k in self.ks))
        if any(k < 1 for k in self.ks):
            raise SpecFormatError("refinement integers must be positive")
        if not 0 <= self.depth <= len(self.ks):
            raise SpecFormatError(
                f"depth must lie in [0, {len(self.ks)}], got {self.depth}"
            )
        for i in range(1, self.depth):
            k, knext = self.ks[i - 1], self.ks[i]
            if k * k / knext > 0.5 ** i:
                warnings.warn(
                    f"growth condition k_{i}^2/k_{i + 1} <= 2^-{i} violated "
                    f"({k * k / knext:.3g} > {0.5 ** i:.3g}); desk-scale runs "
                    "may still be fine",
                    stacklevel=2,
                )

    def r(self, i: int) -> int:
        """Cumulative product r_i = k_1 * ... * k_i (r_0 = 1)."""
        out = 1
        for k in self.ks[:i]:
            out *= k
        return out


@dataclass(frozen=True)
class CantorStage:
    """The component intervals of one refinement level."""

    intervals: tuple[Interval, ...]
    level: int

    @property
    def total_length(self) -> float:
        return sum(iv.length for iv in self.intervals)


def build_stage(spec: CantorSpec, i: int) -> CantorStage:
    """Stage i of the construction: r_i intervals of length 1/r_i^2."""
    if not 0 <= i <= spec.depth:
        raise ValueError(f"stage index must lie in [0, {spec.depth}], got {i}")
    comps = [(0.0, 1.0)]
    for level in range(i):
        k = spec.ks[level]
        new: list[tuple[float, float]] = []
        for a, b in comps:
            length = b - a
            sub = length / (k * k)
            for j in range(k):
                left = a + j * length / k
                new.append((left, left + sub))
        comps = new
    return CantorStage(tuple(Interval(a, b) for a, b in comps), i)


def stage_nodes_slopes(spec: CantorSpec) -> tuple[list[float], list[float]]:
    """Node/slope table of the depth-d staircase on [0, 1].

    Slopes alternate between r_d (on stage components) and 0 (on gaps);
    adjacent duplicate nodes from k = 1 refinements are merged.
    """
    stage = build_stage(spec, spec.depth)
    r = float(spec.r(spec.depth))
    nodes = [0.0]
    slopes: list[float] = []
    for iv in stage.intervals:
        if iv.a > nodes[-1] + 1e-15:
            nodes.append(iv.a)
            slopes.append(0.0)
        nodes.append(iv.b)
        slopes.append(r)
    if nodes[-1] < 1.0 - 1e-15:
        nodes.append(1.0)
        slopes.append(0.0)
    else:
        nodes[-1] = 1.0
    return nodes, slopes


def cantor_function(spec: CantorSpec):
    """Depth-d staircase as an exact BV function on (0, 1)."""
    from .bvfunction import BVFunction1D, CantorPart

    return BVFunction1D(
        domain=Interval(0.0, 1.0),
        cantor_part=CantorPart(spec=spec, scale=1.0, offset=0.0),
    )


@dataclass(frozen=True)
class ScaleSchedule:
    """Window sizes at which the staircase looks jump-like vs ramp-like."""

    jump_scales: tuple[float, ...]
    affine_scales: tuple[float, ...]
    levels: tuple[int, ...]


def scale_schedule(spec: CantorSpec, affine_exponent: float = 0.5) -> ScaleSchedule:
    """Scale lists for levels i = 1 .. depth-1.

    jump scale: 1 / (r_i * r_{i+1}); affine scale: r_i^{-2} * k_{i+1}^{-gamma}.
    Any gamma in (0, 1) gives a scale strictly between the component spacing
    and the component block size; 1/2 is the default.
    """
    if spec.depth < 2:
        raise ValueError("scale schedule needs depth >= 2")
    jump, affine, levels = [], [], []
    for i in range(1, spec.depth):
        ri, rnext = spec.r(i), spec.r(i + 1)
        jump.append(1.0 / (ri * rnext))
        affine.append(ri ** -2.0 * spec.ks[i] ** -affine_exponent)
        levels.append(i)
    return ScaleSchedule(tuple(jump), tuple(affine), tuple(levels))
