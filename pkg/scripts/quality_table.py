"""Min scaled Jacobian of each node cone before and after decomposition, both optimized.

    python3 scripts/quality_table.py [--restarts 4] [--seed 0] [--json out.json]
"""
from __future__ import annotations

import argparse
import json
import time

from hexsing.decompose import decompose_all
from hexsing.meshgen import cone_mesh
from hexsing.quality import OptimizeParams, mesh_bound, optimize

NODE_TYPES = ["(4,0,0)", "(2,2,2)", "(0,4,4)", "(1,3,3)", "(0,3,6)", "(0,2,8)", "(2,0,6)", "(0,0,12)"]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--restarts", type=int, default=OptimizeParams.restarts)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json")
    args = ap.parse_args()
    params = OptimizeParams(restarts=args.restarts, seed=args.seed)

    rows = []
    print(f"{'type':<10} {'original':>9} {'bound':>7} {'decomposed':>11} {'bound':>7} {'secs':>6}")
    for name in NODE_TYPES:
        t0 = time.perf_counter()
        mesh = cone_mesh(name)
        _, before = optimize(mesh, params)
        split_mesh, _ = decompose_all(mesh)
        _, after = optimize(split_mesh, params)
        b0, _ = mesh_bound(mesh)
        b1, _ = mesh_bound(split_mesh)
        row = dict(type=name, original=before.minimum, original_bound=b0, decomposed=after.minimum,
                   decomposed_bound=b1, seconds=time.perf_counter() - t0)
        rows.append(row)
        fmt = lambda x: "-" if x is None else f"{x:.4f}"
        print(f"{name:<10} {before.minimum:>9.4f} {fmt(b0):>7} {after.minimum:>11.4f} {fmt(b1):>7} "
              f"{row['seconds']:>6.1f}", flush=True)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
