"""Planar test functions: linear fields, half-plane / polygon indicators, smooth formulas.

The three structured kinds carry closed forms for mean, mean oscillation,
and variation over any axis-aligned cube (area fractions by polygon
clipping, variation as gradient mass or as discontinuity length inside the
open cube).  A midpoint quadrature path with a reported error estimate
exists for every kind; it is the only path for the ``smooth`` kind and
serves as an independent cross-check for the others.

The structured kinds are closed under the unit-cube rescaling
f_Q = (f o T_Q - mean) * side / tv: a pulled-back half-plane indicator is
again a (value-shifted) half-plane indicator, a polygon stays a polygon and
a linear field stays linear, which keeps blow-up experiments exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import shapely
from shapely.geometry import LinearRing, Polygon, box as shapely_box

from .errors import DomainError, ZeroVariationError
from .geometry import Cube

_EPS = 1e-12


def _poly_area(pts: list[tuple[float, float]]) -> float:
    total = 0.0
    n = len(pts)
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        total += x0 * y1 - x1 * y0
    return 0.5 * abs(total)


def _clip_halfplane(pts: list[tuple[float, float]], nu, c: float):
    """Keep the part of a convex polygon with x . nu >= c (Sutherland-Hodgman step)."""
    out: list[tuple[float, float]] = []
    n = len(pts)
    for i in range(n):
        p, q = pts[i], pts[(i + 1) % n]
        dp = p[0] * nu[0] + p[1] * nu[1] - c
        dq = q[0] * nu[0] + q[1] * nu[1] - c
        if dp >= 0:
            out.append(p)
        if (dp > 0 > dq) or (dp < 0 < dq):
            t = dp / (dp - dq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _cube_corners(cube: Cube) -> list[tuple[float, float]]:
    (cx, cy), h = cube.center, 0.5 * cube.side
    return [(cx - h, cy - h), (cx + h, cy - h), (cx + h, cy + h), (cx - h, cy + h)]


def halfplane_fraction(cube: Cube, normal, offset: float) -> float:
    """Area fraction of the cube lying in {x . normal >= offset} (unit normal)."""
    clipped = _clip_halfplane(_cube_corners(cube), normal, offset)
    if len(clipped) < 3:
        return 0.0
    return _poly_area(clipped) / cube.side ** 2


def halfplane_chord(cube: Cube, normal, offset: float) -> float:
    """Length of {x . normal = offset} inside the open cube (0 if on a face)."""
    nx, ny = normal
    dx, dy = -ny, nx
    p0 = (offset * nx, offset * ny)
    (cx, cy), h = cube.center, 0.5 * cube.side
    t0, t1 = -math.inf, math.inf
    for p, d, c in ((p0[0], dx, cx), (p0[1], dy, cy)):
        if abs(d) < _EPS:
            if abs(p - c) >= h - _EPS:  # line parallel to a face and not interior
                return 0.0
            continue
        ta, tb = (c - h - p) / d, (c + h - p) / d
        if ta > tb:
            ta, tb = tb, ta
        t0, t1 = max(t0, ta), min(t1, tb)
    return max(0.0, t1 - t0)


class Function2D:
    """Base interface for the planar kinds."""

    dim = 2
    quad_order: int = 128

    def values(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def value(self, x: float, y: float) -> float:
        return float(self.values(np.asarray([x]), np.asarray([y]))[0])

    def exact_stats(self, cube: Cube) -> tuple[float, float, float] | None:
        """(mean, osc, tv) over the cube when closed forms exist, else None."""
        return None

    def grad_values(self, xs, ys):
        return None

    def rescaled(self, cube: Cube) -> "Function2D | None":
        """Closed-form f_Q on the unit cube, or None when only sampling works."""
        return None

    # -- quadrature path -----------------------------------------------------

    def _grids(self, cube: Cube, order: int):
        (cx, cy), h = cube.center, 0.5 * cube.side
        edges_x = np.linspace(cx - h, cx + h, order + 1)
        edges_y = np.linspace(cy - h, cy + h, order + 1)
        mids_x = 0.5 * (edges_x[:-1] + edges_x[1:])
        mids_y = 0.5 * (edges_y[:-1] + edges_y[1:])
        return edges_x, edges_y, mids_x, mids_y

    def quad_stats(self, cube: Cube, order: int | None = None) -> tuple[float, float, float]:
        """(mean, osc, est_error) by midpoint quadrature on an order x order cell grid.

        The error estimate charges each cell with half of its sampled value
        range (corners plus midpoint) times the cell area; mean error is
        propagated into the oscillation estimate.
        """
        order = order or self.quad_order
        ex, ey, mx, my = self._grids(cube, order)
        cell_area = (cube.side / order) ** 2
        area = cube.side ** 2
        MX, MY = np.meshgrid(mx, my, indexing="ij")
        CM = self.values(MX.ravel(), MY.ravel()).reshape(order, order)
        CX, CY = np.meshgrid(ex, ey, indexing="ij")
        CV = self.values(CX.ravel(), CY.ravel()).reshape(order + 1, order + 1)
        corners = np.stack([CV[:-1, :-1], CV[1:, :-1], CV[:-1, 1:], CV[1:, 1:], CM])
        rng = corners.max(axis=0) - corners.min(axis=0)
        integral = CM.sum() * cell_area
        est_mean = 0.5 * rng.sum() * cell_area / area
        m = integral / area
        dev = np.abs(corners - m)
        rng_dev = dev.max(axis=0) - dev.min(axis=0)
        osc = np.abs(CM - m).sum() * cell_area / area
        est_osc = 0.5 * rng_dev.sum() * cell_area / area + est_mean
        return float(m), float(osc), float(est_osc)

    def quad_tv(self, cube: Cube, order: int | None = None) -> tuple[float, float]:
        """(tv, est_error) as the quadrature of |grad f| (smooth kind only)."""
        g = self.grad_values
        order = order or self.quad_order
        ex, ey, mx, my = self._grids(cube, order)
        cell_area = (cube.side / order) ** 2
        MX, MY = np.meshgrid(mx, my, indexing="ij")
        gx, gy = g(MX.ravel(), MY.ravel())
        gm = np.hypot(gx, gy).reshape(order, order)
        CX, CY = np.meshgrid(ex, ey, indexing="ij")
        gx, gy = g(CX.ravel(), CY.ravel())
        gc = np.hypot(gx, gy).reshape(order + 1, order + 1)
        stack = np.stack([gc[:-1, :-1], gc[1:, :-1], gc[:-1, 1:], gc[1:, 1:], gm])
        rng = stack.max(axis=0) - stack.min(axis=0)
        return float(gm.sum() * cell_area), float(0.5 * rng.sum() * cell_area)


@dataclass(frozen=True)
class LinearField(Function2D):
    """f(x) = gradient . x + const."""

    gradient: tuple[float, float]
    const: float = 0.0
    quad_order: int = 128

    def values(self, xs, ys):
        gx, gy = self.gradient
        return gx * np.asarray(xs) + gy * np.asarray(ys) + self.const

    def grad_values(self, xs, ys):
        shape = np.shape(np.asarray(xs))
        gx, gy = self.gradient
        return np.full(shape, gx), np.full(shape, gy)

    def exact_stats(self, cube: Cube):
        gx, gy = self.gradient
        a, b = max(abs(gx), abs(gy)), min(abs(gx), abs(gy))
        mean = self.value(*cube.center)
        # average of |a u + b v| over the unit square, scaled by the side
        osc = 0.0 if a == 0 else cube.side * (a / 4.0 + b * b / (12.0 * a))
        tv = math.hypot(gx, gy) * cube.side ** 2
        return mean, osc, tv

    def rescaled(self, cube: Cube):
        gx, gy = self.gradient
        norm = math.hypot(gx, gy)
        if norm == 0:
            raise ZeroVariationError("cannot rescale a constant field")
        sx, sy = cube.signs
        return LinearField((sx * gx / norm, sy * gy / norm), 0.0, self.quad_order)


@dataclass(frozen=True)
class HalfplaneIndicator(Function2D):
    """f = low on {x . normal < offset}, high on the other side; unit normal stored."""

    normal: tuple[float, float]
    offset: float
    low: float = 0.0
    high: float = 1.0
    quad_order: int = 128

    def __post_init__(self):
        nx, ny = self.normal
        norm = math.hypot(nx, ny)
        if norm == 0:
            raise ValueError("half-plane normal must be nonzero")
        object.__setattr__(self, "normal", (nx / norm, ny / norm))
        object.__setattr__(self, "offset", self.offset / norm)

    def values(self, xs, ys):
        nx, ny = self.normal
        side = nx * np.asarray(xs) + ny * np.asarray(ys) >= self.offset
        return np.where(side, self.high, self.low)

    def exact_stats(self, cube: Cube):
        phi = halfplane_fraction(cube, self.normal, self.offset)
        delta = self.high - self.low
        mean = self.low + delta * phi
        osc = abs(delta) * 2.0 * phi * (1.0 - phi)
        tv = abs(delta) * halfplane_chord(cube, self.normal, self.offset)
        return mean, osc, tv

    def rescaled(self, cube: Cube):
        mean, _, tv = self.exact_stats(cube)
        if tv <= 0:
            raise ZeroVariationError("no variation inside the cube")
        nx, ny = self.normal
        sx, sy = cube.signs
        new_normal = (sx * nx, sy * ny)
        new_offset = (self.offset - (cube.center[0] * nx + cube.center[1] * ny)) / cube.side
        scale = cube.side / tv
        return HalfplaneIndicator(
            new_normal, new_offset,
            low=(self.low - mean) * scale, high=(self.high - mean) * scale,
            quad_order=self.quad_order,
        )


@dataclass(frozen=True)
class PolygonIndicator(Function2D):
    """f = low outside a simple polygon, high inside."""

    vertices: tuple[tuple[float, float], ...]
    low: float = 0.0
    high: float = 1.0
    quad_order: int = 128

    def __post_init__(self):
        object.__setattr__(
            self, "vertices", tuple((float(x), float(y)) for x, y in self.vertices)
        )
        if len(self.vertices) < 3:
            raise ValueError("polygon needs at least 3 vertices")

    def _polygon(self) -> Polygon:
        return Polygon(self.vertices)

    def values(self, xs, ys):
        inside = shapely.contains_xy(self._polygon(), np.asarray(xs), np.asarray(ys))
        return np.where(inside, self.high, self.low)

    def exact_stats(self, cube: Cube):
        (cx, cy), h = cube.center, 0.5 * cube.side
        bx = shapely_box(cx - h, cy - h, cx + h, cy + h)
        poly = self._polygon()
        phi = poly.intersection(bx).area / cube.side ** 2
        delta = self.high - self.low
        mean = self.low + delta * phi
        osc = abs(delta) * 2.0 * phi * (1.0 - phi)
        inner = LinearRing(self.vertices).intersection(bx).difference(bx.boundary)
        tv = abs(delta) * inner.length
        return mean, osc, tv

    def rescaled(self, cube: Cube):
        mean, _, tv = self.exact_stats(cube)
        if tv <= 0:
            raise ZeroVariationError("no variation inside the cube")
        new_vertices = tuple(cube.map_to_unit(v) for v in self.vertices)
        scale = cube.side / tv
        return PolygonIndicator(
            new_vertices,
            low=(self.low - mean) * scale, high=(self.high - mean) * scale,
            quad_order=self.quad_order,
        )


def _sine(params):
    a = params.get("a", 1.0)
    b = params.get("b", 1.0)
    amp = params.get("amp", 1.0)

    def f(xs, ys):
        return amp * np.sin(2 * np.pi * a * xs) * np.sin(2 * np.pi * b * ys)

    def grad(xs, ys):
        cx = 2 * np.pi * a * amp * np.cos(2 * np.pi * a * xs) * np.sin(2 * np.pi * b * ys)
        cy = 2 * np.pi * b * amp * np.sin(2 * np.pi * a * xs) * np.cos(2 * np.pi * b * ys)
        return cx, cy

    return f, grad


def _gaussian(params):
    x0 = params.get("x0", 0.0)
    y0 = params.get("y0", 0.0)
    sigma = params.get("sigma", 0.25)
    amp = params.get("amp", 1.0)

    def f(xs, ys):
        return amp * np.exp(-((xs - x0) ** 2 + (ys - y0) ** 2) / (2 * sigma ** 2))

    def grad(xs, ys):
        v = f(xs, ys)
        return -v * (xs - x0) / sigma ** 2, -v * (ys - y0) / sigma ** 2

    return f, grad


SMOOTH_FORMULAS = {"sine": _sine, "gaussian": _gaussian}


@dataclass(frozen=True)
class SmoothField(Function2D):
    """Formula-backed smooth function; all cube statistics go through quadrature."""

    formula: str
    params: tuple[tuple[str, float], ...] = ()
    quad_order: int = 128

    def __post_init__(self):
        if self.formula not in SMOOTH_FORMULAS:
            raise ValueError(
                f"unknown formula {self.formula!r}; have {sorted(SMOOTH_FORMULAS)}"
            )
        object.__setattr__(self, "params", tuple((str(k), float(v)) for k, v in self.params))

    def _fns(self):
        return SMOOTH_FORMULAS[self.formula](dict(self.params))

    def values(self, xs, ys):
        return self._fns()[0](np.asarray(xs), np.asarray(ys))

    def grad_values(self, xs, ys):
        return self._fns()[1](np.asarray(xs), np.asarray(ys))


def check_cube_in_domain(f, cube: Cube) -> None:
    """Structured 2D kinds are global; only sampled domains can fail."""
    if cube.side <= 0:
        raise DomainError("degenerate cube")
