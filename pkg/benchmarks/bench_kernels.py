"""Compiled vs numpy kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times ``cumulant_sums`` (exact cumulants) and ``superpose`` (path
simulation) on both backends, checks that they agree and prints a table.
"""

import argparse
import time

import numpy as np

from supou import _fallback

try:
    from supou import _core
except ImportError:  # extension not built
    _core = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def sums_case(k_max, n, max_order):
    k = np.arange(1, k_max + 1, dtype=float)
    lam, w = 1.0 / k, k**-1.5
    return (lam, w, n, max_order, float(n)), k_max * n


def superpose_case(K, n, seed=0):
    rng = np.random.default_rng(seed)
    rho = np.exp(-1.0 / np.arange(1, K + 1))
    x0 = rng.exponential(size=K)
    counts = rng.poisson(n / np.arange(1, K + 1) + 1)
    ptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    steps = np.concatenate([np.sort(rng.integers(1, n + 1, c)) for c in counts]).astype(np.int64)
    vals = rng.exponential(size=steps.size)
    return (rho, x0, ptr, steps, vals, n), K * n


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _core is None:
        print("compiled extension not built; only the numpy backend is available")
    cases = [
        ("cumulant_sums K=1000 n=1024 m<=4", "cumulant_sums", sums_case(1000, 1024, 4)),
        ("cumulant_sums K=16384 n=1024 m<=4", "cumulant_sums", sums_case(16384, 1024, 4)),
        ("cumulant_sums K=1000 n=1024 m<=8", "cumulant_sums", sums_case(1000, 1024, 8)),
        ("superpose K=1000 n=1024", "superpose", superpose_case(1000, 1024)),
        ("superpose K=3 n=4096", "superpose", superpose_case(3, 4096)),
    ]
    print(f"{'case':38s} {'numpy [ms]':>11s} {'cython [ms]':>12s} {'speed-up':>9s} {'ns/step (cy)':>13s}")
    for label, name, (call_args, steps) in cases:
        t_py, ref = best_of(lambda: getattr(_fallback, name)(*call_args), args.repeat)
        if _core is None:
            print(f"{label:38s} {1e3 * t_py:11.2f} {'-':>12s} {'-':>9s} {'-':>13s}")
            continue
        t_cy, out = best_of(lambda: getattr(_core, name)(*call_args), args.repeat)
        np.testing.assert_allclose(out, ref, rtol=1e-12, atol=1e-12)
        print(f"{label:38s} {1e3 * t_py:11.2f} {1e3 * t_cy:12.2f} {t_py / t_cy:8.1f}x {1e9 * t_cy / steps:13.2f}")


if __name__ == "__main__":
    main()
