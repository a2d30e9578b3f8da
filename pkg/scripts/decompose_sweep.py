"""Run decompose_all on padded and unpadded cone meshes of the node types and report the outcome.

    python3 scripts/decompose_sweep.py [--seeds 0 1 2] [--max-retries 200]
"""
from __future__ import annotations

import argparse
import time

from hexsing.decompose import DecomposeConfig, RetriesExhausted, decompose_all
from hexsing.meshgen import cone_mesh

NAMES = ["(4,0,0)", "(2,2,2)", "(0,4,4)", "(1,3,3)", "(0,3,6)", "(0,2,8)", "(2,0,6)", "(0,0,12)",
         "(1,3,3,1)", "(0,4,4,1)", "(0,2,8,1)", "(2,3,0,2)"]


def run(name, pad, seed, retries):
    t0 = time.perf_counter()
    try:
        _, log = decompose_all(cone_mesh(name), DecomposeConfig(seed=seed, pad=pad, max_retries=retries))
        return "ok", len(log.steps), 0, time.perf_counter() - t0
    except RetriesExhausted as exc:
        return "stuck", len(exc.log.steps), len(exc.log.remaining_nodes), time.perf_counter() - t0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--max-retries", type=int, default=DecomposeConfig.max_retries)
    args = ap.parse_args()
    print(f"{'type':<10} {'seed':>4} {'padded':<22} {'unpadded':<22}")
    for name in NAMES:
        for seed in args.seeds:
            cells = []
            for pad in (True, False):
                status, steps, left, secs = run(name, pad, seed, args.max_retries)
                cells.append(f"{status} {steps} steps {left} left {secs:.1f}s")
            print(f"{name:<10} {seed:>4} {cells[0]:<22} {cells[1]:<22}", flush=True)


if __name__ == "__main__":
    main()
