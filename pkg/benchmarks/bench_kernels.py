#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Workloads mirror the hot paths of the workbench: batched matrix products and
inversions at GL_2(29) scale (680k 2x2 matrices over a prime field), the same
over the table-driven field F_4, centralizer/normalizer scans, and the
multiplication-table closures used by subgroup-lattice enumeration.

Run:  python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from brownlevi import _kernels
from brownlevi.fields import get_field


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads():
    rng = np.random.default_rng(42)
    f29 = get_field(29, (1, 2))
    f4 = get_field(4, (1, 2))
    big = rng.integers(0, 29, size=(680_000, 2, 2)).astype(np.uint8)
    big2 = rng.integers(0, 29, size=(680_000, 2, 2)).astype(np.uint8)
    med4 = rng.integers(0, 4, size=(120_000, 3, 3)).astype(np.uint8)
    med4b = rng.integers(0, 4, size=(120_000, 3, 3)).astype(np.uint8)

    def invertible(fld, n, count):
        from brownlevi.fields import rref

        out = []
        while len(out) < count:
            m = rng.integers(0, fld.q, size=(n, n)).astype(np.uint8)
            if len(rref(m, fld)[1]) == n:
                out.append(m)
        return np.array(out, dtype=np.uint8)

    inv29 = np.tile(invertible(f29, 2, 500), (200, 1, 1))
    inv4 = np.tile(invertible(f4, 3, 200), (100, 1, 1))
    w = inv4[3]
    pow_q = (4 ** np.arange(9, dtype=np.uint64)).astype(np.uint64)
    sub = inv4[:3]
    sub_codes = np.sort(_kernels.encode(sub, pow_q))
    inv4_inv = _kernels.NUMPY_IMPLS["batch_inverse"](inv4, *f4.kernel_args(), f4.inv_t, f4.neg_t)
    table = (np.arange(360)[:, None] + np.arange(360)[None, :]) % 360  # Z/360
    gens = np.array([7, 90], dtype=np.int64)

    return [
        ("matmul 680k 2x2 / F29 (prime)", lambda impl: impl(big, big2, *f29.kernel_args())),
        ("matmul 120k 3x3 / F4 (tables)", lambda impl: impl(med4, med4b, *f4.kernel_args())),
        (
            "batch_inverse 100k 2x2 / F29",
            lambda impl: impl(inv29, *f29.kernel_args(), f29.inv_t, f29.neg_t),
        ),
        (
            "batch_inverse 20k 3x3 / F4",
            lambda impl: impl(inv4, *f4.kernel_args(), f4.inv_t, f4.neg_t),
        ),
        ("commute_mask 20k 3x3 / F4", lambda impl: impl(inv4, w, *f4.kernel_args())),
        (
            "conj_in_set 20k 3x3 / F4",
            lambda impl: impl(inv4, inv4_inv, sub, sub_codes, pow_q, *f4.kernel_args()),
        ),
        ("closure_in_table 360", lambda impl: impl(table, gens, 360)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.NUMBA_IMPLS:
        print("numba backend unavailable (BROWNLEVI_KERNELS=numpy?); nothing to compare")
        return
    names = {
        "matmul": "matmul",
        "batch_inverse": "batch_inverse",
        "commute_mask": "commute_mask",
        "conj_in_set": "conj_in_set_mask",
        "closure_in_table": "closure_in_table",
    }
    print(f"{'workload':<36} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for label, call in workloads():
        key = next(v for k, v in names.items() if label.startswith(k))
        # warm up the jit before timing
        call(_kernels.NUMBA_IMPLS[key])
        t_np, out_np = timeit(lambda: call(_kernels.NUMPY_IMPLS[key]), args.repeat)
        t_nb, out_nb = timeit(lambda: call(_kernels.NUMBA_IMPLS[key]), args.repeat)
        assert np.array_equal(np.asarray(out_np), np.asarray(out_nb)), f"mismatch in {label}"
        print(f"{label:<36} {t_np*1e3:>8.1f}ms {t_nb*1e3:>8.1f}ms {t_np/t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
