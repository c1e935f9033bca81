"""Benchmark the jitted kernels against the pure-numpy fallback.

Times the hot paths (point assignment, block averaging, full k-means, one
refinement pass) on sizes matching the standard simulation scales, checks
that both backends return bit-identical results, and prints a speedup
table.

Run from the repository root:

    python benchmarks/bench_backends.py
"""

import time

import numpy as np

from heteroclust import _backend
from heteroclust.clustering import ClusterAssignment, KMeansConfig, approx_kmeans, hlloyd
from heteroclust.model import generate_subgaussian_tbm
from heteroclust.tensor3 import Tensor3


def timeit(fn, repeat=5):
    best = np.inf
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best * 1000.0, result


def bench_assign(kern, n=5000, d=9, k=5):
    rng = np.random.default_rng(0)
    x = rng.standard_normal((n, d))
    c = rng.standard_normal((k, d))
    return timeit(lambda: kern.assign_points(x, c))


def bench_block_sums(kern, n=100, k=3):
    rng = np.random.default_rng(1)
    y = rng.standard_normal((n, n, n))
    z = [rng.integers(0, k, size=n) for _ in range(3)]
    return timeit(lambda: kern.block_sums(y, z[0], z[1], z[2], k, k, k))


def bench_kmeans(n=500, d=9, k=5):
    rng = np.random.default_rng(2)
    x = rng.standard_normal((n, d))
    return timeit(lambda: approx_kmeans(x, k, KMeansConfig(seed=3)), repeat=3)


def bench_hlloyd(n=80, k=3):
    y, truth = generate_subgaussian_tbm(n, k, 0.6, seed=4, balanced=True)
    return timeit(lambda: hlloyd(y, truth.assignments, 10), repeat=3)


CASES = [
    ("assign_points (5000x9, k=5)", lambda: bench_assign(_backend.kernels())),
    ("block_sums (100^3, k=3)", lambda: bench_block_sums(_backend.kernels())),
    ("approx_kmeans (500x9, k=5)", bench_kmeans),
    ("hlloyd 10 rounds (80^3, k=3)", bench_hlloyd),
]


def result_signature(value):
    if isinstance(value, tuple):
        return tuple(result_signature(v) for v in value)
    if isinstance(value, Tensor3):
        return value.data.tobytes()
    if isinstance(value, ClusterAssignment):
        return value.labels.tobytes()
    if isinstance(value, np.ndarray):
        return value.tobytes()
    return value


def main():
    try:
        _backend.set_backend("numba")
    except ImportError:
        print("numba is not installed; nothing to compare")
        return
    print("warming up jitted kernels...")
    for _, fn in CASES:
        fn()

    rows = []
    for name, fn in CASES:
        _backend.set_backend("numba")
        t_nb, out_nb = fn()
        _backend.set_backend("numpy")
        t_np, out_np = fn()
        match = result_signature(out_nb) == result_signature(out_np)
        rows.append((name, t_nb, t_np, t_np / t_nb, match))

    _backend.set_backend("auto")
    width = max(len(r[0]) for r in rows)
    print(f"\n{'kernel':<{width}}  {'numba':>10}  {'numpy':>10}  "
          f"{'speedup':>8}  identical")
    print("-" * (width + 46))
    for name, t_nb, t_np, speedup, match in rows:
        print(f"{name:<{width}}  {t_nb:>8.2f}ms  {t_np:>8.2f}ms  "
              f"{speedup:>7.2f}x  {'yes' if match else 'NO'}")


if __name__ == "__main__":
    main()
