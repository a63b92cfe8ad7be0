#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Runs each hot kernel on representative sizes under both backends in one
process (the dispatchers are bypassed so BELLBOUND_BACKEND does not matter
here) and prints a timing table plus the agreement between the results.

Usage:  python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from bellbound import _kernels
from bellbound.matrices import tensor_power


def timeit(fn, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_gray(repeats):
    rows = []
    for n in (16, 20, 22):
        rng = np.random.default_rng(n)
        A = rng.standard_normal((n, n))
        t_np, (v_np, i_np) = timeit(lambda: _kernels._gray_scan_np(A), repeats)
        if _kernels.NUMBA_ENABLED:
            t_nb, (v_nb, i_nb) = timeit(lambda: _kernels._gray_scan_nb(A), repeats)
            agree = abs(v_np - v_nb) / max(1.0, abs(v_np))
            rows.append((f"gray scan {n}x{n} (2^{n-1} vertices)", t_np, t_nb, agree))
        else:
            rows.append((f"gray scan {n}x{n}", t_np, None, 0.0))
    return rows


def bench_alternating(repeats):
    rows = []
    for n in (16, 64):
        rng = np.random.default_rng(n)
        A = rng.standard_normal((n, n))

        def run(impl):
            r = np.random.default_rng(0)
            x = r.standard_normal((n, n))
            x /= np.linalg.norm(x, axis=1, keepdims=True)
            y = r.standard_normal((n, n))
            y /= np.linalg.norm(y, axis=1, keepdims=True)
            hist, _ = impl(A, x, y, 500, 1e-9)
            return hist[-1]

        t_np, v_np = timeit(lambda: run(_kernels._alt_sweeps_np), repeats)
        if _kernels.NUMBA_ENABLED:
            t_nb, v_nb = timeit(lambda: run(_kernels._alt_sweeps_nb), repeats)
            agree = abs(v_np - v_nb) / max(1.0, abs(v_np))
            rows.append((f"alternating sweeps {n}x{n}", t_np, t_nb, agree))
        else:
            rows.append((f"alternating sweeps {n}x{n}", t_np, None, 0.0))
    return rows


def bench_jacobi(repeats):
    rows = []
    for n in (32, 96):
        rng = np.random.default_rng(n)
        S = rng.standard_normal((n, n))
        S = (S + S.T) / 2.0
        t_np, w_np = timeit(lambda: _kernels._jacobi_np(S, 1e-11, 100), repeats)
        if _kernels.NUMBA_ENABLED:
            t_nb, w_nb = timeit(lambda: _kernels._jacobi_nb(S, 1e-11, 100), repeats)
            agree = float(np.abs(w_np - w_nb).max())
            rows.append((f"jacobi eigenvalues {n}x{n}", t_np, t_nb, agree))
        else:
            rows.append((f"jacobi eigenvalues {n}x{n}", t_np, None, 0.0))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if _kernels.NUMBA_ENABLED:
        _kernels.warm_up()
        # compile on the benchmark shapes too
        _kernels._gray_scan_nb(tensor_power(2).entries.copy())
    else:
        print("numba unavailable or disabled; timing the numpy path only\n")

    rows = []
    rows += bench_gray(args.repeats)
    rows += bench_alternating(args.repeats)
    rows += bench_jacobi(args.repeats)

    header = f"{'kernel':40s} {'numpy':>12s} {'numba':>12s} {'speedup':>9s} {'agreement':>11s}"
    print(header)
    print("-" * len(header))
    for name, t_np, t_nb, agree in rows:
        if t_nb is None:
            print(f"{name:40s} {t_np*1e3:9.2f} ms {'-':>12s} {'-':>9s} {'-':>11s}")
        else:
            print(
                f"{name:40s} {t_np*1e3:9.2f} ms {t_nb*1e3:9.2f} ms "
                f"{t_np/t_nb:8.1f}x {agree:11.2e}"
            )


if __name__ == "__main__":
    main()
