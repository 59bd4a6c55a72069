"""Command-line front end: JSON/CSV artifacts and one-line summaries.

Subcommands: osc, tv, pack, pc, tangent, cantor, verify.  Reports are
deterministic for identical configurations (timings are only written when
--timings is passed).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

from .bvfunction import BVFunction1D
from .cantor import CantorSpec, cantor_function, scale_schedule
from .errors import BVOscError, SpecFormatError
from .geometry import Cube, Interval
from .localpc import centered_cube_sequence, extract_tangent, p_profile, rigidity_diagnose
from .oscillation import osc, total_variation
from .packing import PackingProblem, solve
from .serialization import dumps, function_to_dict, load_function, write_json
from .verify import SUITES, run_suites


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t != ""]
    except ValueError as e:
        raise SpecFormatError(f"expected comma-separated numbers, got {text!r}") from e


def _parse_cube(text: str, dim: int):
    vals = _parse_floats(text)
    if dim == 1:
        if len(vals) != 2:
            raise SpecFormatError("1D cube must be 'a,b'")
        return Interval(vals[0], vals[1])
    if len(vals) != 3:
        raise SpecFormatError("2D cube must be 'cx,cy,side'")
    return Cube((vals[0], vals[1]), vals[2])


def _fn_dim(f) -> int:
    return 1 if isinstance(f, BVFunction1D) else 2


def _say(args, text: str) -> None:
    if not args.quiet:
        print(text)


def _cmd_osc(args) -> int:
    f = load_function(args.fn)
    Q = _parse_cube(args.cube, _fn_dim(f))
    result = osc(f, Q, method=args.method)
    if args.out:
        write_json(result.to_dict(), args.out)
    _say(args, f"osc: mean={result.mean:.12g} osc={result.osc:.12g} "
               f"tv={result.tv:.12g} quotient="
               f"{'undefined' if result.quotient is None else f'{result.quotient:.12g}'} "
               f"est_error={result.est_error:.3g}")
    return 0


def _cmd_tv(args) -> int:
    f = load_function(args.fn)
    Q = _parse_cube(args.cube, _fn_dim(f)) if args.cube else None
    value = total_variation(f, Q)
    if args.out:
        write_json({"tv": value}, args.out)
    _say(args, f"tv: {value:.12g}")
    return 0


def _cmd_pack(args) -> int:
    f = load_function(args.fn)
    dim = _fn_dim(f)
    if args.domain:
        domain = _parse_cube(args.domain, dim)
    elif dim == 1:
        domain = f.domain
    else:
        raise SpecFormatError("2D packing needs --domain cx,cy,side")
    prob = PackingProblem(f=f, domain=domain, mode=args.mode,
                          eps=args.eps, lattice_step=args.h)
    kwargs = {}
    if dim == 2:
        kwargs = {"seed": args.seed, "budget": args.budget, "threads": args.threads}
    fam = solve(prob, **kwargs)
    if args.out:
        write_json(fam.to_dict(), args.out)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            if dim == 1:
                w.writerow(["left", "right", "weight", "mean", "osc", "tv",
                            "quotient", "est_error"])
                for pc in fam.cubes:
                    s = pc.stats
                    w.writerow([pc.cube.a, pc.cube.b, pc.weight, s.mean, s.osc,
                                s.tv, s.quotient, s.est_error])
            else:
                w.writerow(["center_x", "center_y", "side", "weight", "mean",
                            "osc", "tv", "quotient", "est_error"])
                for pc in fam.cubes:
                    s = pc.stats
                    w.writerow([pc.cube.center[0], pc.cube.center[1],
                                pc.cube.side, pc.weight, s.mean, s.osc, s.tv,
                                s.quotient, s.est_error])
    _say(args, f"pack[{args.mode}]: value={fam.value:.12g} "
               f"bounds=[{fam.lower_bound:.12g}, {fam.upper_bound:.12g}] "
               f"cubes={len(fam.cubes)} exact={fam.exact}")
    return 0


def _parse_point(text: str, dim: int):
    vals = _parse_floats(text)
    if len(vals) != dim:
        raise SpecFormatError(f"point must have {dim} coordinates, got {text!r}")
    return vals[0] if dim == 1 else tuple(vals)


def _cmd_pc(args) -> int:
    f = load_function(args.fn)
    x = _parse_point(args.x, _fn_dim(f))
    schedule = _parse_floats(args.eps_schedule)
    profile = p_profile(f, x, args.tau, schedule)
    payload = {
        "x": x, "tau": args.tau,
        "samples": [{"eps": e, "p_value": v,
                     "argmax_cube": None if c is None else
                     {"center": list(c.center), "side": c.side}}
                    for e, v, c in profile.samples],
        "p_estimate": profile.p_estimate,
        "in_support": profile.in_support,
        "log_slope": profile.log_slope,
        "axis_aligned": True,
    }
    if args.out:
        write_json(payload, args.out)
    _say(args, f"pc: p_estimate={profile.p_estimate:.12g} "
               f"in_support={profile.in_support} slope={profile.log_slope:.3g}")
    return 0


def _cmd_tangent(args) -> int:
    f = load_function(args.fn)
    dim = _fn_dim(f)
    x = _parse_point(args.x, dim)
    seq = centered_cube_sequence(x, args.side0, args.ratio, args.count,
                                 offset_frac=args.offset_frac, dim=dim)
    cand = extract_tangent(f, x, args.tau, seq, gap_tol=args.tol)
    payload = {
        "x": x, "tau": args.tau, "osc": cand.osc,
        "tv_estimate": cand.tv_estimate, "l1_cauchy_gap": cand.l1_cauchy_gap,
        "converged": cand.converged, "axis_aligned": True,
    }
    if cand.converged:
        rep = rigidity_diagnose(cand, args.tau)
        payload["class"] = rep.kind
        payload["fit_error"] = rep.fit_error
        if rep.max_subcube_quotient is not None:
            payload["max_subcube_quotient"] = rep.max_subcube_quotient
            payload["quarter_bound_ok"] = rep.quarter_bound_ok
    if args.out:
        write_json(payload, args.out)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            if dim == 1:
                n = len(cand.samples)
                w.writerow(["y", "value"])
                for i, v in enumerate(cand.samples):
                    w.writerow([-0.5 + (i + 0.5) / n, v])
            else:
                n = cand.samples.shape[0]
                w.writerow(["y1", "y2", "value"])
                for i in range(n):
                    for j in range(n):
                        w.writerow([-0.5 + (i + 0.5) / n, -0.5 + (j + 0.5) / n,
                                    cand.samples[i, j]])
    _say(args, f"tangent: osc={cand.osc:.12g} gap={cand.l1_cauchy_gap:.3g} "
               f"converged={cand.converged}"
               + (f" class={payload.get('class')}" if cand.converged else ""))
    return 0


def _cmd_cantor(args) -> int:
    ks = tuple(int(k) for k in args.ks.split(","))
    depth = args.depth if args.depth is not None else len(ks)
    spec = CantorSpec(ks=ks, depth=depth)
    f = cantor_function(spec)
    payload = function_to_dict(f)
    if depth >= 2:
        sched = scale_schedule(spec)
        payload["scale_schedule"] = {
            "jump_scales": list(sched.jump_scales),
            "affine_scales": list(sched.affine_scales),
            "levels": list(sched.levels),
        }
    if args.out:
        write_json(payload, args.out)
    else:
        print(dumps(payload))
    _say(args, f"cantor: ks={ks} depth={depth} tv={total_variation(f):.12g}")
    return 0


def _cmd_verify(args) -> int:
    reports = run_suites(args.suite.split(","), threads=args.threads)
    payload = {
        "suites": [r.to_dict(include_runtime=args.timings) for r in reports],
        "all_passed": all(r.passed for r in reports),
    }
    if args.out:
        write_json(payload, args.out)
    for r in reports:
        _say(args, f"verify[{r.theorem}]: {'PASS' if r.passed else 'FAIL'} "
                   f"({sum(i.passed for i in r.items)}/{len(r.items)} checks)")
    return 0 if payload["all_passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bvosc",
        description="Oscillation functionals, cube packings, and blow-up "
                    "tangents of exactly represented BV functions.",
    )
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get("BVOSC_THREADS", "1")),
                   help="worker threads for suite-level parallelism "
                        "(default: BVOSC_THREADS or 1)")
    p.add_argument("--tol", type=float, default=1e-3,
                   help="tolerance override for convergence checks")
    p.add_argument("--quiet", action="store_true", help="suppress summary lines")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("osc", help="mean oscillation statistics over one cube")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--cube", required=True, help="'a,b' (1D) or 'cx,cy,side' (2D)")
    sp.add_argument("--method", default="auto", choices=["auto", "exact", "grid"])
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_osc)

    sp = sub.add_parser("tv", help="total variation over one cube (or the domain)")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--cube")
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_tv)

    sp = sub.add_parser("pack", help="maximize the packed oscillation sum")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--mode", required=True, choices=["keps", "geps"])
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--h", type=float, required=True, help="lattice step")
    sp.add_argument("--domain", help="override domain: 'a,b' or 'cx,cy,side'")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=200)
    sp.add_argument("--out")
    sp.add_argument("--csv")
    sp.set_defaults(func=_cmd_pack)

    sp = sub.add_parser("pc", help="local Poincare constant profile at a point")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--x", required=True, help="point ('x' or 'x,y')")
    sp.add_argument("--tau", type=float, default=0.9)
    sp.add_argument("--eps-schedule", required=True, help="decreasing list, e.g. 0.1,0.05")
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_pc)

    sp = sub.add_parser("tangent", help="blow-up extraction and classification")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--tau", type=float, default=0.9)
    sp.add_argument("--side0", type=float, default=0.25, help="largest cube side")
    sp.add_argument("--ratio", type=float, default=0.5)
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--offset-frac", type=float, default=0.0,
                    help="off-center position of x as a fraction of the side")
    sp.add_argument("--out")
    sp.add_argument("--csv")
    sp.set_defaults(func=_cmd_tangent)

    sp = sub.add_parser("cantor", help="emit a staircase function spec")
    sp.add_argument("--ks", required=True, help="comma-separated refinement integers")
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_cantor)

    sp = sub.add_parser("verify", help="run the theorem-reproduction suites")
    sp.add_argument("--suite", default="all",
                    help=f"comma-separated: {','.join(SUITES)} or 'all'")
    sp.add_argument("--out")
    sp.add_argument("--timings", action="store_true",
                    help="include runtimes in the JSON report (breaks byte-identity)")
    sp.set_defaults(func=_cmd_verify)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BVOscError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
