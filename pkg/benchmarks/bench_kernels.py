"""Benchmark the compiled KDE kernels against the numpy fallback.

The kernels are the inner loop of the Monte Carlo studies (one n x n
Gaussian kernel sum per replicate), so this is the compiled extension's
reason to exist.  Run:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from lnre import _kernels
from lnre._kernels import _fallback


def best_of(fn, repeats=7):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    if _kernels.BACKEND != "cython":
        print("compiled core not available; timing the fallback only")
    rng = np.random.default_rng(0)
    print(f"{'case':<34}{'numpy':>12}{'cython':>12}{'speedup':>10}")
    for n, reps in ((50, 2000), (200, 500), (1000, 50), (5000, 5)):
        centers = rng.normal(size=n)
        h = 0.9 * n ** (-0.2)

        def run(impl):
            def inner():
                for _ in range(reps):
                    impl.gauss_kde_self_weights(centers, h, 0.9)

            return inner

        t_py = best_of(run(_fallback))
        label = f"self_weights n={n} x{reps}"
        if _kernels.BACKEND == "cython":
            from lnre._kernels import _core

            t_cy = best_of(run(_core))
            print(f"{label:<34}{t_py:>11.4f}s{t_cy:>11.4f}s{t_py / t_cy:>9.2f}x")
        else:
            print(f"{label:<34}{t_py:>11.4f}s{'-':>12}{'-':>10}")

    for nq, nc in ((100_000, 66), (10_000, 1000)):
        query = rng.normal(size=nq)
        centers = rng.normal(size=nc)
        h = 0.5

        def run_eval(impl):
            def inner():
                impl.gauss_kde_eval(query, centers, h)

            return inner

        t_py = best_of(run_eval(_fallback))
        label = f"eval {nq} pts x {nc} centers"
        if _kernels.BACKEND == "cython":
            from lnre._kernels import _core

            t_cy = best_of(run_eval(_core))
            print(f"{label:<34}{t_py:>11.4f}s{t_cy:>11.4f}s{t_py / t_cy:>9.2f}x")
        else:
            print(f"{label:<34}{t_py:>11.4f}s{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
