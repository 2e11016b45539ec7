#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Usage: python benchmarks/bench_kernels.py [--atoms 2048] [--freqs 200000]

The same kernels are selected at import time by FRACTALEXT_KERNELS; here we
import both implementations directly so one process can time the two lanes
side by side (the numba lane is warmed up once before timing so compilation
is not measured).
"""

import argparse
import time

import numpy as np

from fractalext._kernels import _numpy_impl

try:
    from fractalext._kernels import _numba_impl
except ImportError:
    _numba_impl = None


def bench(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--atoms", type=int, default=2048)
    ap.add_argument("--freqs", type=int, default=200_000)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    pos = np.sort(rng.uniform(0.0, 1.0, args.atoms))
    w = rng.uniform(0.0, 1.0, args.atoms)
    xi = rng.uniform(-1e3, 1e3, args.freqs)

    rows = []
    t_np = bench(_numpy_impl.nudft, pos, w, xi, repeats=args.repeats)
    rows.append(("nudft", "numpy", t_np, 1.0))
    e_np = bench(_numpy_impl.pair_energy, pos, w, 0.5, repeats=args.repeats)
    rows.append(("pair_energy", "numpy", e_np, 1.0))

    if _numba_impl is not None:
        _numba_impl.nudft(pos[:4], w[:4], xi[:4])  # warm up the JIT
        _numba_impl.pair_energy(pos[:4], w[:4], 0.5)
        t_nb = bench(_numba_impl.nudft, pos, w, xi, repeats=args.repeats)
        rows.append(("nudft", "numba", t_nb, t_np / t_nb))
        e_nb = bench(_numba_impl.pair_energy, pos, w, 0.5, repeats=args.repeats)
        rows.append(("pair_energy", "numba", e_nb, e_np / e_nb))
    else:
        print("numba unavailable; timing the numpy lane only")

    print(f"atoms={args.atoms} freqs={args.freqs} (best of {args.repeats})")
    print(f"{'kernel':<14}{'backend':<9}{'seconds':>10}{'speedup':>9}")
    for kernel, backend, secs, speedup in rows:
        print(f"{kernel:<14}{backend:<9}{secs:>10.4f}{speedup:>8.1f}x")


if __name__ == "__main__":
    main()
