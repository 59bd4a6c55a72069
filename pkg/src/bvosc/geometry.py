"""Intervals and oriented axis-aligned cubes.

A cube is axis-aligned with an orientation given by per-axis flip flags.
The affine map T_Q sends the centered unit cube Q0 = (-1/2, 1/2)^n onto Q,
preserving angles: T_Q(y)_i = center_i + side * (+-y_i).  Orientation only
matters for the rescaling bookkeeping (it never changes Osc or |Df|).

All cubes here are axis-aligned.  Suprema computed over them are lower
bounds for the corresponding suprema over freely rotated cubes; reports
downstream carry an ``axis_aligned`` flag for that reason.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DegenerateCubeError

_TOL = 1e-12


@dataclass(frozen=True)
class Interval:
    """Open interval (a, b), the 1D cube."""

    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if not self.a < self.b:
            raise DegenerateCubeError(f"interval needs a < b, got ({self.a}, {self.b})")

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def center(self) -> float:
        return 0.5 * (self.a + self.b)

    def shrink(self, tau: float) -> "Interval":
        """Concentric tau-contraction."""
        c, h = self.center, 0.5 * tau * self.length
        return Interval(c - h, c + h)

    def contains_point(self, x: float, tol: float = _TOL) -> bool:
        return self.a - tol <= x <= self.b + tol

    def contains(self, other: "Interval", tol: float = _TOL) -> bool:
        return self.a - tol <= other.a and other.b <= self.b + tol

    def intersects(self, other: "Interval", tol: float = _TOL) -> bool:
        """Open-interval intersection; shared endpoints do not count."""
        return min(self.b, other.b) - max(self.a, other.a) > tol


@dataclass(frozen=True)
class Cube:
    """Oriented axis-aligned cube: center, sidelength, per-axis flip flags."""

    center: tuple[float, ...]
    side: float
    axis_flip: tuple[bool, ...] = field(default=())

    def __post_init__(self):
        if self.side <= 0:
            raise DegenerateCubeError(f"cube needs side > 0, got {self.side}")
        object.__setattr__(self, "side", float(self.side))
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        flips = self.axis_flip or (False,) * len(self.center)
        if len(flips) != len(self.center):
            raise DegenerateCubeError("axis_flip length must match dimension")
        object.__setattr__(self, "axis_flip", tuple(bool(b) for b in flips))

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def signs(self) -> tuple[float, ...]:
        return tuple(-1.0 if f else 1.0 for f in self.axis_flip)

    def shrink(self, tau: float) -> "Cube":
        return Cube(self.center, tau * self.side, self.axis_flip)

    def axis_interval(self, i: int) -> Interval:
        h = 0.5 * self.side
        return Interval(self.center[i] - h, self.center[i] + h)

    def as_interval(self) -> Interval:
        if self.dim != 1:
            raise ValueError("as_interval is only defined for 1D cubes")
        return self.axis_interval(0)

    def map_from_unit(self, y: tuple[float, ...]) -> tuple[float, ...]:
        """T_Q(y) for y in Q0 coordinates."""
        s = self.signs
        return tuple(c + self.side * sg * yi for c, sg, yi in zip(self.center, s, y))

    def map_to_unit(self, x: tuple[float, ...]) -> tuple[float, ...]:
        """T_Q^{-1}(x)."""
        s = self.signs
        return tuple((xi - c) / (self.side * sg) for c, sg, xi in zip(self.center, s, x))

    def map_cube(self, inner: "Cube") -> "Cube":
        """Image T_Q(S) of a cube S given in Q0 coordinates, with composed orientation."""
        if inner.dim != self.dim:
            raise ValueError("dimension mismatch")
        center = self.map_from_unit(inner.center)
        flips = tuple(a != b for a, b in zip(self.axis_flip, inner.axis_flip))
        return Cube(center, self.side * inner.side, flips)

    def contains_point(self, x: tuple[float, ...], tol: float = _TOL) -> bool:
        h = 0.5 * self.side + tol
        return all(abs(xi - c) <= h for xi, c in zip(x, self.center))

    def contains(self, other: "Cube", tol: float = _TOL) -> bool:
        return all(
            self.axis_interval(i).contains(other.axis_interval(i), tol)
            for i in range(self.dim)
        )

    def intersects(self, other: "Cube", tol: float = _TOL) -> bool:
        """Open-cube overlap; closed abutment (shared faces) does not count."""
        return all(
            self.axis_interval(i).intersects(other.axis_interval(i), tol)
            for i in range(self.dim)
        )


def unit_cube(dim: int) -> Cube:
    """Q0 = (-1/2, 1/2)^dim with identity orientation."""
    return Cube((0.0,) * dim, 1.0)


def interval_as_cube(iv: Interval, flip: bool = False) -> Cube:
    return Cube((iv.center,), iv.length, (flip,))
