"""Benchmark the compiled walk kernel against the numpy fallback.

Runs the same seeded hitting-time workload through every available backend,
checks the outputs are bit-identical, and reports throughput.  Usage:

    python benchmarks/bench_kernels.py [--n 20] [--trials 20000] [--seed 1]

The dense-bitmap membership path is used for n <= 24 and the binary-search
path above that, matching production dispatch; pass --n 26 to time the
latter (keep --trials modest there, the state space no longer fits a map).
"""
import argparse
import time

import numpy as np

from cubewalk import sample_without_replacement
from cubewalk.kernels import available_backends
from cubewalk.walk_mc import BITMAP_MAX_N


def build_workload(n: int, set_size: int, seed: int):
    B = sample_without_replacement(n, set_size, seed)
    sorted_targets = np.sort(np.fromiter(B.members, dtype=np.uint64))
    bitmap = None
    if n <= BITMAP_MAX_N:
        bitmap = np.zeros(1 << n, dtype=np.uint8)
        bitmap[sorted_targets.astype(np.int64)] = 1
    x0 = 0
    while x0 in B.members:
        x0 += 1
    return sorted_targets, bitmap, x0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20, help="cube dimension")
    ap.add_argument("--set-size", type=int, default=256,
                    help="number of target vertices")
    ap.add_argument("--trials", type=int, default=20_000,
                    help="trajectories per backend")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--cap", type=int, default=1 << 18,
                    help="per-trajectory step budget")
    args = ap.parse_args()

    sorted_targets, bitmap, x0 = build_workload(args.n, args.set_size, args.seed)
    backends = available_backends()
    print(f"n={args.n}  |B|={args.set_size}  trials={args.trials}  "
          f"cap={args.cap}  membership="
          f"{'bitmap' if bitmap is not None else 'bsearch'}")
    if "compiled" not in backends:
        print("note: compiled extension not built "
              "(python setup.py build_ext --inplace); timing numpy only")

    results = {}
    for name, run_trials in sorted(backends.items()):
        t0 = time.perf_counter()
        steps, hit = run_trials(args.n, sorted_targets, bitmap, x0,
                                args.seed, 0, 0, args.trials, args.cap)
        dt = time.perf_counter() - t0
        results[name] = (steps, hit, dt)
        rate = args.trials / dt
        print(f"{name:>9}: {dt:8.3f} s   {rate:10.0f} trials/s   "
              f"mean steps {float(np.mean(steps)):.1f}   "
              f"censored {int(np.sum(~hit))}")

    if len(results) == 2:
        (s_a, h_a, t_a), (s_b, h_b, t_b) = results["compiled"], results["numpy"]
        if not (np.array_equal(s_a, s_b) and np.array_equal(h_a, h_b)):
            raise SystemExit("FAIL: backends disagree on a shared stream")
        print(f"backends bit-identical; compiled is {t_b / t_a:.1f}x faster")


if __name__ == "__main__":
    main()
