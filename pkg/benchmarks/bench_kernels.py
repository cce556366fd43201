#!/usr/bin/env python3
"""Benchmark the compiled distance kernels against the numpy fallback.

Times the three kernel entry points plus a full Lloyd run at a few
problem sizes and prints a comparison table. Run after `pip install -e .`:

    python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import time

import numpy as np

from activeanno.kernels import _numpy_backend

try:
    from activeanno.kernels import _ckernels
except ImportError:
    _ckernels = None

SIZES = [
    (500, 8, 10),
    (2000, 50, 15),
    (2000, 50, 30),
    (10000, 50, 20),
]
REPEATS = 5


def _time(fn, *args) -> float:
    best = float("inf")
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _lloyd(backend, X, C0, iters=15):
    C = C0.copy()
    for _ in range(iters):
        labels, _sqd, sums, counts = backend.lloyd_step(X, C)
        counts = np.maximum(counts, 1)
        C = sums / counts[:, None]
    return C


def main() -> None:
    rng = np.random.default_rng(7)
    backends = [("numpy", _numpy_backend)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("compiled kernels not available; timing numpy fallback only")

    header = f"{'case':<28}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for n, d, k in SIZES:
        X = np.ascontiguousarray(rng.normal(size=(n, d)))
        C = np.ascontiguousarray(X[rng.choice(n, size=k, replace=False)])
        cases = {
            f"sqdist n={n} d={d} k={k}": lambda b, X=X, C=C: b.sqdist_matrix(X, C),
            f"assign n={n} d={d} k={k}": lambda b, X=X, C=C: b.assign_nearest(X, C),
            f"lloyd15 n={n} d={d} k={k}": lambda b, X=X, C=C: _lloyd(b, X, C),
        }
        for case, runner in cases.items():
            times = [_time(runner, backend) for _, backend in backends]
            row = f"{case:<28}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
            if len(times) == 2:
                row += f"{times[0] / times[1]:>9.2f}x"
            print(row)

    if _ckernels is not None:
        X = np.ascontiguousarray(rng.normal(size=(1000, 16)))
        C = np.ascontiguousarray(X[:7])
        la, da = _numpy_backend.assign_nearest(X, C)
        lb, db = _ckernels.assign_nearest(X, C)
        agree = np.array_equal(la, lb) and np.allclose(da, db, atol=1e-10)
        print(f"\nbackend agreement on random input: {'ok' if agree else 'MISMATCH'}")


if __name__ == "__main__":
    main()
