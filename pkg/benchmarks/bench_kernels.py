#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the two hot paths (entropy split search and brute-force k-NN) and a
full random-forest fit through each backend, and checks that both
backends pick identical splits on the benchmark data.

Usage: python benchmarks/bench_kernels.py [--rows 2000] [--features 200]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from apilabels import kernels
from apilabels.learn import ForestParams


def _time(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_best_split(backend, X, y, rows, features, repeats):
    return _time(lambda: backend.best_split(X, y, rows, features, 1), repeats)


def bench_knn(backend, X, Q, k, repeats):
    return _time(lambda: backend.knn_indices(X, Q, k), repeats)


def bench_forest(backend_name, X, y, repeats):
    import importlib

    import apilabels.learn.forest as forest_mod

    saved = kernels.best_split
    kernels.best_split = kernels.get_backend(backend_name).best_split
    try:
        params = ForestParams(n_estimators=10, max_depth=12)
        return _time(lambda: forest_mod.train_forest(X, y, params, seed=1), repeats)
    finally:
        kernels.best_split = saved


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=2000)
    parser.add_argument("--features", type=int, default=200)
    parser.add_argument("--queries", type=int, default=400)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    try:
        fast = kernels.get_backend("fast")
    except ImportError:
        raise SystemExit("compiled kernels are not built; run pip install -e . first")
    pure = kernels.get_backend("pure")

    rng = np.random.default_rng(0)
    X = rng.normal(size=(args.rows, args.features))
    y = (X[:, 0] + 0.5 * X[:, 1] > 0).astype(np.uint8)
    rows = np.arange(args.rows, dtype=np.int64)
    features = np.arange(args.features, dtype=np.int64)
    Q = rng.normal(size=(args.queries, args.features))

    split_fast = fast.best_split(X, y, rows, features, 1)
    split_pure = pure.best_split(X, y, rows, features, 1)
    agree = split_fast[0] == split_pure[0] and abs(split_fast[2] - split_pure[2]) < 1e-9
    print(f"split agreement: {'yes' if agree else 'NO'}  fast={split_fast} pure={split_pure}")

    print(f"\n{'kernel':<22}{'fast (s)':>12}{'pure (s)':>12}{'speedup':>10}")
    t_fast = bench_best_split(fast, X, y, rows, features, args.repeats)
    t_pure = bench_best_split(pure, X, y, rows, features, args.repeats)
    print(f"{'best_split':<22}{t_fast:>12.4f}{t_pure:>12.4f}{t_pure / t_fast:>9.1f}x")

    t_fast = bench_knn(fast, X, Q, 10, args.repeats)
    t_pure = bench_knn(pure, X, Q, 10, args.repeats)
    print(f"{'knn_indices':<22}{t_fast:>12.4f}{t_pure:>12.4f}{t_pure / t_fast:>9.1f}x")

    t_fast = bench_forest("fast", X, y, max(1, args.repeats - 2))
    t_pure = bench_forest("pure", X, y, max(1, args.repeats - 2))
    print(f"{'train_forest (10x12)':<22}{t_fast:>12.4f}{t_pure:>12.4f}{t_pure / t_fast:>9.1f}x")


if __name__ == "__main__":
    main()
