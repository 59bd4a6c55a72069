"""Mean oscillation, total variation, and Poincare quotients on cubes.

The quotient side^(n-1) * Osc(f, Q) / |Df|(Q) never exceeds 1/2 on a cube;
equality forces a jump across an axis-parallel bisecting hyperplane, which
is what ``hadwiger_check`` probes for indicator functions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bvfunction import BVFunction1D, PiecewiseBV
from .errors import DomainError, ZeroVariationError
from .function2d import Function2D
from .geometry import Cube, Interval, unit_cube

CLOSED_FORM_TOL = 1e-9
QUADRATURE_TOL = 1e-3


@dataclass(frozen=True)
class OscResult:
    """Mean, oscillation, variation, and quotient of one (function, cube) pair."""

    mean: float
    osc: float
    tv: float
    quotient: float | None
    est_error: float = 0.0

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "osc": self.osc,
            "tv": self.tv,
            "quotient": self.quotient,
            "est_error": self.est_error,
        }


def _as_interval(Q) -> Interval:
    if isinstance(Q, Cube):
        return Q.as_interval()
    return Q


def _check_1d(f: BVFunction1D, iv: Interval) -> None:
    if not f.domain.contains(iv):
        raise DomainError(
            f"cube ({iv.a}, {iv.b}) outside domain ({f.domain.a}, {f.domain.b})"
        )


def osc(f, Q, method: str = "auto", order: int | None = None) -> OscResult:
    """Oscillation statistics of f over a cube or interval.

    1D inputs always go through the closed-form path.  2D inputs use the
    kind's closed form when one exists (``method="auto"``/"exact") or
    midpoint quadrature with a reported error estimate (``method="grid"``).
    """
    if isinstance(f, BVFunction1D):
        iv = _as_interval(Q)
        _check_1d(f, iv)
        mean, osc_val = f.piecewise.oscillation(iv.a, iv.b)
        tv = f.piecewise.variation(iv.a, iv.b)
        quot = osc_val / tv if tv > 0 else None
        return OscResult(mean, osc_val, tv, quot, 0.0)
    if isinstance(f, Function2D):
        if not isinstance(Q, Cube) or Q.dim != 2:
            raise DomainError("2D functions need a 2D cube")
        exact = f.exact_stats(Q) if method in ("auto", "exact") else None
        if exact is not None:
            mean, osc_val, tv = exact
            est = 0.0
        elif method == "exact":
            raise ValueError(f"no closed form for {type(f).__name__}")
        else:
            mean, osc_val, est = f.quad_stats(Q, order)
            tv_exact = f.exact_stats(Q)
            if tv_exact is not None:
                tv = tv_exact[2]
            else:
                tv, tv_est = f.quad_tv(Q, order)
                est += 0.0 if tv <= 0 else tv_est * osc_val / tv
        quot = Q.side * osc_val / tv if tv > 0 else None
        return OscResult(mean, osc_val, tv, quot, est)
    raise TypeError(f"unsupported function type {type(f).__name__}")


def total_variation(f, Q=None) -> float:
    """|Df|(Q) with the open-cube convention (boundary atoms excluded)."""
    if isinstance(f, BVFunction1D):
        iv = _as_interval(Q) if Q is not None else f.domain
        _check_1d(f, iv)
        return f.piecewise.variation(iv.a, iv.b)
    if isinstance(f, Function2D):
        if Q is None:
            raise ValueError("2D variation needs an explicit cube")
        exact = f.exact_stats(Q)
        if exact is not None:
            return exact[2]
        return f.quad_tv(Q)[0]
    raise TypeError(f"unsupported function type {type(f).__name__}")


def poincare_quotient(f, Q, method: str = "auto") -> float:
    """side^(n-1) * Osc(f, Q) / |Df|(Q); raises on zero-variation cubes."""
    result = osc(f, Q, method=method)
    if result.quotient is None:
        raise ZeroVariationError("Poincare quotient undefined: |Df|(Q) = 0")
    return result.quotient


@dataclass(frozen=True)
class HadwigerReport:
    is_maximizer: bool
    quotient: float


def hadwiger_check(E: Function2D, cube: Cube | None = None,
                   tol: float = QUADRATURE_TOL, method: str = "auto") -> HadwigerReport:
    """Check whether an indicator attains the maximal quotient 1/2 on the cube.

    A positive answer pins the set down: up to complement and null sets it
    must be a half-cube (axis-parallel bisection).
    """
    cube = cube or unit_cube(2)
    kind = type(E).__name__
    if kind not in ("HalfplaneIndicator", "PolygonIndicator"):
        raise TypeError("hadwiger_check expects an indicator-kind function")
    result = osc(E, cube, method=method)
    if result.tv <= 0:
        raise ZeroVariationError("zero-perimeter set: quotient undefined")
    q = cube.side * result.osc / result.tv
    return HadwigerReport(abs(q - 0.5) <= tol + result.est_error, q)
