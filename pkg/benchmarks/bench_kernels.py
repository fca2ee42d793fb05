"""Compiled kernel vs pure-Python fallback, and Mersenne vs plain modulus.

    python3 benchmarks/bench_kernels.py [--sizes 100 200 400] [--density 0.05] [--repeats 3]

Speedups depend on compiler and hardware; nothing here is asserted.
"""

import argparse
import random
import time

import numpy as np

from ncf4.linalg.zp import BACKENDS, SparseMatrix, rref_mod_p

P31 = 2 ** 31 - 1


def random_matrix(n, density, p, seed):
    rng = random.Random(seed)
    rows = []
    for _ in range(n):
        cols = sorted(rng.sample(range(n), max(1, int(density * n))))
        rows.append((tuple(cols), tuple(rng.randrange(1, p) for _ in cols)))
    return SparseMatrix(n, rows)


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def bench_rref(sizes, density, repeats, threads):
    print(f"rref_mod_p, density {density}, best of {repeats} (seconds)")
    print(f"{'n':>6} {'p':>11} " + " ".join(f"{b:>10}" for b in sorted(BACKENDS)) + "   speedup")
    for n in sizes:
        for p in (P31, 2147483629):
            m = random_matrix(n, density, p, n)
            t = {b: best_of(lambda b=b: rref_mod_p(m, p, threads, backend=b), repeats) for b in sorted(BACKENDS)}
            ratio = t["python"] / t["cython"] if "cython" in t else float("nan")
            print(f"{n:>6} {p:>11} " + " ".join(f"{t[b]:>10.4f}" for b in sorted(BACKENDS)) + f"   {ratio:7.1f}x")


def bench_reduce(repeats):
    if "cython" not in BACKENDS:
        print("compiled kernels unavailable; skipping the reduction benchmark")
        return
    kernels = BACKENDS["cython"]
    lo, hi = 2 ** 31 - 2 ** 16, 2 ** 31 + 2 ** 16
    rounds = 200
    slow = best_of(lambda: kernels.bench_reduce(lo, hi, rounds, 31, False), repeats)
    fast = best_of(lambda: kernels.bench_reduce(lo, hi, rounds, 31, True), repeats)
    assert kernels.bench_reduce(lo, hi, 3, 31, False) == kernels.bench_reduce(lo, hi, 3, 31, True)
    print(f"\nreduce 2^31 +- 2^16 ({rounds} passes): plain % {slow:.4f}s, Mersenne {fast:.4f}s, "
          f"ratio {slow / fast:.2f}x")
    v = np.random.default_rng(0).integers(0, 2 ** 62, 10 ** 7, dtype=np.uint64)
    t_np = best_of(lambda: v % np.uint64(P31), repeats)
    t_m = best_of(lambda: kernels.mersenne_reduce_array(v, 31), repeats)
    print(f"10^7 random values: numpy % {t_np:.4f}s, Mersenne array {t_m:.4f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400])
    ap.add_argument("--density", type=float, default=0.05)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    bench_rref(args.sizes, args.density, args.repeats, args.threads)
    bench_reduce(args.repeats)


if __name__ == "__main__":
    main()
