#!/usr/bin/env python3
"""Geometry spot checks: sphere ball volumes against closed forms and a
Monte Carlo oracle, tube volumes against the strip/cylinder forms, and
the discrete metric-space recurrence sweep."""

import argparse
import json

from qrecur import verify


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mc-samples", type=int, default=10_000_000)
    ap.add_argument("--metric-count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    geo = verify.geometry_suite(mc_samples=args.mc_samples, seed=args.seed)
    metric = verify.metric_recurrence_suite(count=args.metric_count, seed=args.seed)
    special = verify.special_function_suite()
    out = {"geometry": geo, "metric_recurrence": metric, "special_functions": special}
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0 if all(v["ok"] for v in out.values()) else 1


if __name__ == "__main__":
    raise SystemExit(main())
