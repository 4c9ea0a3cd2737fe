"""Command-line front end.

Subcommands: bounds, search, strobe, truncate, verify, geometry.
Structured reports go to JSON, time series to CSV; outputs are
byte-identical across runs with the same configuration and seed.

Exit codes: 0 success, 1 precondition violation (machine-readable error
JSON on stdout), 2 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import bounds, verify
from .errors import QrecurError
from .search import Grid, default_dt, find_recurrence, stroboscopic_recurrence
from .states import system_from_dict
from .torus import (
    FiniteMetricSpace,
    injectivity_radius,
    metric_recurrence_oracle,
    sphere_ball_volume,
    torus_from_state,
    torus_volume,
    tube_volume,
)
from .truncation import choose_N, truncate

MAX_AUTO_SAMPLES = 10_000_000
MAX_CSV_SAMPLES = 200_000


def _dump_json(obj, path: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_system(path: str):
    with open(path) as fh:
        return system_from_dict(json.load(fh))


def _cmd_bounds(args) -> int:
    H, rho0 = _load_system(args.input)
    eps = bounds.threshold_to_epsilon(args.threshold, bounds.EPS_BURES_SCALE)
    report = bounds.energy_bounds(H, rho0, eps)
    out = report.to_dict()
    out["threshold"] = args.threshold
    nu = [float(e) / (2.0 * math.pi * H.hbar) for e in H.energies]
    est_in = bounds.EstimatorInputs(n=H.dim, nu=tuple(nu), epsilon=eps)
    out["estimates"] = {
        "note": "order-of-magnitude estimates, not bounds",
        "peres": _try_estimate(bounds.peres_estimate, est_in),
        "bhattacharyya": _try_estimate(bounds.bhattacharyya_estimate, est_in),
    }
    _dump_json(out, args.output)
    return 0


def _try_estimate(fn, inp):
    try:
        return fn(inp)
    except QrecurError as exc:
        return {"error": type(exc).__name__, "message": str(exc)}


def _resolve_grid(args, H, report) -> Grid:
    dt = default_dt(H) if args.dt == "auto" else float(args.dt)
    if args.horizon == "auto":
        horizon = report.upper_product + 2.0 * dt if report else MAX_AUTO_SAMPLES * dt
        steps = min(MAX_AUTO_SAMPLES, math.ceil(horizon / dt))
    else:
        steps = math.ceil(float(args.horizon) / dt)
    return Grid(args.t0, dt, max(1, steps))


def _cmd_search(args) -> int:
    H, rho0 = _load_system(args.input)
    eps = bounds.threshold_to_epsilon(args.threshold, bounds.EPS_BURES_SCALE)
    report = None
    try:
        report = bounds.energy_bounds(H, rho0, eps)
    except QrecurError:
        pass  # bounds unavailable (stationary / precondition); search still runs
    grid = _resolve_grid(args, H, report)
    want_csv = bool(args.csv)
    result = find_recurrence(
        H,
        rho0,
        args.threshold,
        grid,
        allow_coarse=args.allow_coarse,
        refine=args.refine,
        report=report,
        record_samples=want_csv and grid.steps <= MAX_CSV_SAMPLES,
    )
    out = result.to_dict()
    out["epsilon"] = eps
    out["epsilon_convention"] = bounds.EPS_BURES_SCALE
    out["hbar"] = H.hbar
    out["norms"] = {"bures": "from fidelity", "trace_dist": "trace", "hs_dist": "hilbert-schmidt"}
    if report is not None:
        out["bounds"] = report.to_dict()
    _dump_json(out, args.output)
    if want_csv:
        _write_csv(args.csv, result.samples)
    return 0


def _write_csv(path: str, samples):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "fidelity", "bures", "trace_dist", "hs_dist", "torus_dist"])
        for s in samples:
            writer.writerow(
                [
                    repr(s.t),
                    repr(s.fidelity),
                    repr(s.bures),
                    repr(s.trace_dist),
                    repr(s.hs_dist),
                    "" if s.torus_dist is None else repr(s.torus_dist),
                ]
            )


def _cmd_strobe(args) -> int:
    H, rho0 = _load_system(args.input)
    res = stroboscopic_recurrence(
        H, rho0, args.epsilon, args.t, jmax_cap=args.jmax_cap
    )
    _dump_json(
        {
            "epsilon": args.epsilon,
            "epsilon_convention": bounds.EPS_FIDELITY_FLOOR,
            "t": args.t,
            "j_found": res.j_found,
            "t_rec": None if res.j_found is None else res.j_found * args.t,
            "jmax_theory": _finite_or_str(res.jmax_theory),
            "cap": res.cap,
            "cap_exceeded": res.cap_exceeded,
        },
        args.output,
    )
    return 0


def _finite_or_str(x: float):
    return x if math.isfinite(x) else "inf"


def _cmd_truncate(args) -> int:
    H, rho0 = _load_system(args.input)
    if args.N is not None:
        N = args.N
    elif args.delta_target is not None:
        N = choose_N(rho0, args.delta_target, order=args.order)
    else:
        print("need --N or --delta-target", file=sys.stderr)
        return 2
    trunc = truncate(rho0, N, order=args.order)
    out = trunc.to_dict()
    out["norm"] = "hilbert-schmidt (delta_N excludes cross blocks; complement_hs_sq includes them)"
    if args.epsilon is not None:
        report = bounds.truncated_bounds(H, trunc, args.epsilon, args.mode)
        out["bounds"] = report.to_dict()
    _dump_json(out, args.output)
    return 0


def _cmd_geometry(args) -> int:
    out = {}
    if args.ball:
        n, r = int(args.ball[0]), float(args.ball[1])
        out["ball"] = {"n": n, "r": r, "volume": sphere_ball_volume(n, r)}
    if args.tube:
        n, theta, length = int(args.tube[0]), float(args.tube[1]), float(args.tube[2])
        out["tube"] = {
            "n": n,
            "theta": theta,
            "length": length,
            "volume": tube_volume(n, theta, length),
        }
    if args.state:
        _, rho0 = _load_system(args.state)
        t = torus_from_state(rho0, reduce_support=args.reduce_support)
        out["torus"] = {
            "radii": [float(r) for r in t.radii],
            "injectivity_radius": injectivity_radius(t),
            "volume": torus_volume(t),
        }
    if args.metric_space:
        with open(args.metric_space) as fh:
            spec = json.load(fh)
        space = FiniteMetricSpace.from_dict(spec)
        res = metric_recurrence_oracle(
            space, np.asarray(spec["permutation"], dtype=int), args.point, args.r
        )
        out["metric_recurrence"] = {
            "n_rec": res.n_rec,
            "bound": res.bound,
            "ok": res.ok,
            "ball_convention": "open, radius r/2",
        }
    if not out:
        print("nothing to do: pass --ball/--tube/--state/--metric-space", file=sys.stderr)
        return 2
    _dump_json(out, args.output)
    return 0


def _cmd_verify(args) -> int:
    names = None if args.suite == "all" else {args.suite}
    results = verify.run_suites(names, seed=args.seed)
    for name, res in results.items():
        if name == "ok":
            continue
        print(f"{name}: {'PASS' if res['ok'] else 'FAIL'}")
    if args.output:
        _dump_json(results, args.output)
    return 0 if results["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrecur",
        description="Recurrence-time bounds and measurements for quantum mixed states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="evaluate theoretical recurrence bounds")
    p.add_argument("--input", required=True, help="system JSON file")
    p.add_argument("--threshold", type=float, required=True, help="fidelity threshold in (0, 1)")
    p.add_argument("--output", help="report JSON path (default stdout)")
    p.set_defaults(fn=_cmd_bounds)

    p = sub.add_parser("search", help="measure the recurrence time on a grid")
    p.add_argument("--input", required=True)
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--dt", default="auto", help="grid step or 'auto'")
    p.add_argument("--horizon", default="auto", help="scan horizon (time) or 'auto'")
    p.add_argument("--allow-coarse", action="store_true")
    p.add_argument("--refine", action="store_true", help="bisection-refine crossings")
    p.add_argument("--output", help="result JSON path (default stdout)")
    p.add_argument("--csv", help="time-series CSV path")
    p.set_defaults(fn=_cmd_search)

    p = sub.add_parser("strobe", help="stroboscopic recurrence search")
    p.add_argument("--input", required=True)
    p.add_argument("--epsilon", type=float, required=True, help="fidelity floor in (0, 1]")
    p.add_argument("--t", type=float, required=True, help="stroboscopic step length")
    p.add_argument("--jmax-cap", type=int, default=100_000)
    p.add_argument("--output")
    p.set_defaults(fn=_cmd_strobe)

    p = sub.add_parser("truncate", help="N-relevant-state approximation")
    p.add_argument("--input", required=True)
    p.add_argument("--N", type=int)
    p.add_argument("--delta-target", type=float)
    p.add_argument("--order", choices=["energy", "population"], default="energy")
    p.add_argument("--epsilon", type=float, help="also evaluate truncated bounds")
    p.add_argument("--mode", choices=["energy", "dimension"], default="energy")
    p.add_argument("--output")
    p.set_defaults(fn=_cmd_truncate)

    p = sub.add_parser("geometry", help="torus/sphere/tube volumes and the metric oracle")
    p.add_argument("--ball", nargs=2, metavar=("N", "R"))
    p.add_argument("--tube", nargs=3, metavar=("N", "THETA", "LENGTH"))
    p.add_argument("--state", help="system JSON; reports the phase-torus geometry")
    p.add_argument("--reduce-support", action="store_true")
    p.add_argument("--metric-space", help="JSON {points, dist, measure, permutation}")
    p.add_argument("--point", type=int, default=0)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--output")
    p.set_defaults(fn=_cmd_geometry)

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--suite", default="all", choices=["all", *verify.ALL_SUITES])
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output")
    p.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except QrecurError as exc:
        error = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "max_epsilon", None) is not None:
            error["max_epsilon"] = exc.max_epsilon
        print(json.dumps(error, indent=2, sort_keys=True))
        return 1
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
