"""Compare the compiled and pure-Python Munkres kernels.

    python benchmarks/bench_munkres.py [--repeat 20]

Sizes cover acceptance-style small matrices and the K x J weight matrices of
a full-scale drop (K = 20..40 users, J close to M = 100 virtual clusters).
"""

import argparse
import sys
import time

import numpy as np

from cellfree_assoc import assignment

SIZES = [(8, 8), (20, 100), (40, 100), (100, 100), (200, 200)]


def time_backend(backend, F, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = assignment.hungarian_max(F, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, res


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = [b for b in ("compiled", "python") if b in assignment._BACKENDS]
    if "compiled" not in backends:
        print("compiled kernel not built; timing the pure-Python fallback only", file=sys.stderr)
    rng = np.random.default_rng(args.seed)
    print(f"{'size':>10} " + " ".join(f"{b + ' [ms]':>15}" for b in backends) + f" {'speedup':>8}")
    for K, J in SIZES:
        F = rng.uniform(0.0, 10.0, size=(K, J))
        times, results = [], []
        for b in backends:
            t, res = time_backend(b, F, args.repeat)
            times.append(t)
            results.append(res)
        if len(results) == 2 and not np.array_equal(results[0].assigned_vc, results[1].assigned_vc):
            raise SystemExit(f"backends disagree at {K}x{J}")
        speedup = f"{times[1] / times[0]:8.1f}" if len(times) == 2 else f"{'-':>8}"
        print(f"{K:>4}x{J:<5} " + " ".join(f"{t * 1e3:15.3f}" for t in times) + f" {speedup}")


if __name__ == "__main__":
    main()
