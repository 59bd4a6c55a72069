"""JSON function specs and deterministic report writing.

Floats are emitted with 17 significant digits so identical configurations
produce byte-identical files that round-trip exactly.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from .bvfunction import BVFunction1D, CantorPart
from .cantor import CantorSpec
from .errors import SpecFormatError
from .function2d import (
    HalfplaneIndicator,
    LinearField,
    PolygonIndicator,
    SmoothField,
)
from .geometry import Interval


def format_float(x: float) -> str:
    if math.isnan(x):
        raise ValueError("NaN is not serializable")
    if math.isinf(x):
        raise ValueError("infinity is not serializable")
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return format(x, ".17g")


def dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON with fixed float formatting (keys kept in insertion order)."""
    pad = " " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        inner = ", ".join(dumps(v, indent) for v in obj)
        return f"[{inner}]"
    if isinstance(obj, dict):
        items = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {dumps(v, indent + 2)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(obj, path) -> None:
    Path(path).write_text(dumps(obj) + "\n")


# -- function specs ------------------------------------------------------------


def function_to_dict(f) -> dict:
    if isinstance(f, BVFunction1D):
        out = {
            "dim": 1,
            "domain": [f.domain.a, f.domain.b],
            "breakpoints": list(f.breakpoints),
            "slopes": list(f.slopes),
            "atoms": [[x, h] for x, h in f.atoms],
        }
        if f.cantor_part is not None:
            cp = f.cantor_part
            out["cantor"] = {
                "ks": list(cp.spec.ks),
                "depth": cp.spec.depth,
                "scale": cp.scale,
                "offset": cp.offset,
            }
        return out
    if isinstance(f, LinearField):
        return {"dim": 2, "kind": "linear", "gradient": list(f.gradient),
                "const": f.const, "quad_order": f.quad_order}
    if isinstance(f, HalfplaneIndicator):
        return {"dim": 2, "kind": "halfplane_indicator", "normal": list(f.normal),
                "offset": f.offset, "low": f.low, "high": f.high,
                "quad_order": f.quad_order}
    if isinstance(f, PolygonIndicator):
        return {"dim": 2, "kind": "polygon_indicator",
                "vertices": [[x, y] for x, y in f.vertices],
                "low": f.low, "high": f.high, "quad_order": f.quad_order}
    if isinstance(f, SmoothField):
        return {"dim": 2, "kind": "smooth", "formula": f.formula,
                "params": dict(f.params), "quad_order": f.quad_order}
    raise TypeError(f"cannot serialize {type(f).__name__}")


def _need(d: dict, key: str, where: str):
    if key not in d:
        raise SpecFormatError(f"missing field {key!r} in {where}")
    return d[key]


def function_from_dict(d: dict):
    if not isinstance(d, dict):
        raise SpecFormatError("function spec must be a JSON object")
    dim = _need(d, "dim", "function spec")
    if dim == 1:
        domain = _need(d, "domain", "1D spec")
        if not (isinstance(domain, (list, tuple)) and len(domain) == 2):
            raise SpecFormatError("field 'domain' must be [a, b]")
        cantor = None
        if d.get("cantor") is not None:
            c = d["cantor"]
            cantor = CantorPart(
                spec=CantorSpec(ks=tuple(_need(c, "ks", "cantor part")),
                                depth=int(_need(c, "depth", "cantor part"))),
                scale=float(c.get("scale", 1.0)),
                offset=float(c.get("offset", 0.0)),
            )
        breakpoints = tuple(d.get("breakpoints", ()))
        return BVFunction1D(
            domain=Interval(float(domain[0]), float(domain[1])),
            breakpoints=breakpoints,
            slopes=tuple(d.get("slopes", (0.0,) * (len(breakpoints) + 1))),
            atoms=tuple((x, h) for x, h in d.get("atoms", ())),
            cantor_part=cantor,
        )
    if dim == 2:
        kind = _need(d, "kind", "2D spec")
        order = int(d.get("quad_order", 128))
        if kind == "linear":
            g = _need(d, "gradient", "linear spec")
            return LinearField(gradient=(float(g[0]), float(g[1])),
                               const=float(d.get("const", 0.0)), quad_order=order)
        if kind == "halfplane_indicator":
            n = _need(d, "normal", "halfplane spec")
            return HalfplaneIndicator(
                normal=(float(n[0]), float(n[1])),
                offset=float(_need(d, "offset", "halfplane spec")),
                low=float(d.get("low", 0.0)), high=float(d.get("high", 1.0)),
                quad_order=order,
            )
        if kind == "polygon_indicator":
            verts = _need(d, "vertices", "polygon spec")
            return PolygonIndicator(
                vertices=tuple((float(x), float(y)) for x, y in verts),
                low=float(d.get("low", 0.0)), high=float(d.get("high", 1.0)),
                quad_order=order,
            )
        if kind == "smooth":
            return SmoothField(
                formula=str(_need(d, "formula", "smooth spec")),
                params=tuple(sorted(d.get("params", {}).items())),
                quad_order=order,
            )
        raise SpecFormatError(f"unknown 2D kind {kind!r}")
    raise SpecFormatError(f"field 'dim' must be 1 or 2, got {dim!r}")


def load_function(path):
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecFormatError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    return function_from_dict(data)


def save_function(f, path) -> None:
    write_json(function_to_dict(f), path)
