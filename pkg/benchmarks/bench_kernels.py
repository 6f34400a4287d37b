"""Benchmark the numba kernels against the pure-python/numpy fallbacks.

Runs each kernel on synthetic tables (cyclic multiplication tables and
random permutation families), timing the jitted path and the interpreted
implementation on identical inputs and asserting equal outputs.

    python3 benchmarks/bench_kernels.py [--n 512] [--reps 5]

Setting PROFMACK_NO_NUMBA=1 makes both columns run the fallback (useful to
check the flag itself).
"""

import argparse
import time

import numpy as np

from profmack import _kernels as K


def cyclic_table(n: int) -> np.ndarray:
    i = np.arange(n)
    return (i[:, None] + i[None, :]) % n


def bench(fn, args, reps):
    best = float("inf")
    out = None
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=512)
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"numba available and enabled: {K.HAVE_NUMBA}")

    mult = np.ascontiguousarray(cyclic_table(args.n), dtype=np.int64)
    seed = np.array([1], dtype=np.int64)
    if K.HAVE_NUMBA:
        K._closure_jit(mult, seed)  # warm the jit outside the timing loop
    t_jit, out_jit = bench(K._closure_jit, (mult, seed), args.reps)
    t_py, out_py = bench(K._closure_impl, (mult, seed), args.reps)
    assert np.array_equal(np.sort(out_jit), np.sort(out_py))
    print(f"closure   n={args.n}: jit {t_jit * 1e3:8.2f} ms  "
          f"python {t_py * 1e3:8.2f} ms  speedup {t_py / max(t_jit, 1e-12):6.1f}x")

    n_pts = args.n * 8
    perms = np.stack([rng.permutation(n_pts) for _ in range(16)]).astype(np.int64)
    perms = np.ascontiguousarray(perms)
    if K.HAVE_NUMBA:
        K._orbits_jit(perms, n_pts)
    t_jit, lab_jit = bench(K._orbits_jit, (perms, n_pts), args.reps)
    t_py, lab_py = bench(K._orbits_impl, (perms, n_pts), args.reps)
    assert np.array_equal(lab_jit, lab_py)
    print(f"orbits n_pts={n_pts}: jit {t_jit * 1e3:8.2f} ms  "
          f"python {t_py * 1e3:8.2f} ms  speedup {t_py / max(t_jit, 1e-12):6.1f}x")


if __name__ == "__main__":
    main()
