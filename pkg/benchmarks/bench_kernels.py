#!/usr/bin/env python3
"""Numba versus pure-numpy kernels.

Part 1 times the Polya-gamma and Geyer ESS kernels of both backends in one
process (compilation excluded by a warm-up call). Part 2 times a full
logistic chain end to end in two subprocesses, one with HSGIBBS_DISABLE_NUMBA
set, so the backend choice is made exactly as users see it.

    python benchmarks/bench_kernels.py [--sizes 1000,10000,100000] [--json out.json]
"""
import argparse
import json
import os
import subprocess
import sys

from hsgibbs.bench import kernel_benchmark

CHAIN_SNIPPET = """
import json, time
import numpy as np
from hsgibbs import GlmData, SamplerConfig, kernels, run_chain_glm
r = np.random.default_rng(0)
x = r.standard_normal(({n}, 5))
y = (r.random({n}) < 1 / (1 + np.exp(-x[:, 0]))).astype(float)
d = GlmData.with_intercept(x, y)
run_chain_glm(d, SamplerConfig(n_burn=0, n_keep=5, seed=0))
t = time.perf_counter()
run_chain_glm(d, SamplerConfig(n_burn=0, n_keep={keep}, seed=0))
print(json.dumps({{"backend": kernels.active_backend(), "seconds": time.perf_counter() - t}}))
"""


def chain_timing(disable_numba, n, keep):
    env = dict(os.environ, HSGIBBS_DISABLE_NUMBA="1" if disable_numba else "0")
    code = CHAIN_SNIPPET.format(n=n, keep=keep)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--chain-n", type=int, default=2000)
    ap.add_argument("--chain-keep", type=int, default=200)
    ap.add_argument("--json", help="also write the raw rows here")
    args = ap.parse_args(argv)

    sizes = tuple(int(s) for s in args.sizes.split(","))
    rows = kernel_benchmark(sizes=sizes, repeats=args.repeats)
    by_key = {(r["backend"], r["kernel"], r["size"]): r["seconds"] for r in rows}
    print(f"{'kernel':<10} {'size':>8} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for kernel in ("pg1", "geyer_tau"):
        for size in sizes:
            t_np = by_key[("numpy", kernel, size)]
            t_nb = by_key.get(("numba", kernel, size))
            if t_nb is None:
                print(f"{kernel:<10} {size:>8} {t_np:>10.4f} {'n/a':>10} {'n/a':>8}")
            else:
                print(f"{kernel:<10} {size:>8} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")

    chains = [chain_timing(flag, args.chain_n, args.chain_keep) for flag in (True, False)]
    print(f"\nlogistic chain, n={args.chain_n}, p=6, {args.chain_keep} sweeps")
    for c in chains:
        print(f"  {c['backend']:<6} {c['seconds']:.3f} s")

    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"kernels": rows, "chains": chains}, fh, indent=2)


if __name__ == "__main__":
    main()
