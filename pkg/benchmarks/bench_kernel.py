"""Timing comparison of the two batch ZFBF kernels.

Runs the full draw -> condition check -> invert -> water-fill -> sum-rate
pipeline on identical channel batches through the compiled Cython kernel
and the vectorized numpy fallback, and prints per-size timings.

Usage: python benchmarks/bench_kernel.py [--batch N] [--repeats R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from dmimopart._kernel import available_backends, get_backend


def bench(fn, h, p, repeats):
    fn(h[:8], p, 1e12)  # warm-up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(h, p, 1e12)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--batch", type=int, default=2000, help="matrices per timed call")
    ap.add_argument("--repeats", type=int, default=5, help="timed repeats, best taken")
    ap.add_argument("--sizes", type=str, default="2,4,6,9,12,16")
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    backends = available_backends()
    if len(backends) < 2:
        print("compiled kernel not built; timing numpy fallback only")

    rng = np.random.default_rng(0)
    p = 10.0
    header = f"{'k':>4} {'batch':>7}" + "".join(f" {name:>12}" for name in backends)
    if len(backends) == 2:
        header += f" {'speedup':>9}"
    print(header)

    for k in sizes:
        h = (
            rng.standard_normal((args.batch, k, k)) + 1j * rng.standard_normal((args.batch, k, k))
        ) / np.sqrt(2.0)
        times = {}
        for name in backends:
            times[name] = bench(get_backend(name).batch_zfbf_rates, h, p, args.repeats)
        line = f"{k:>4} {args.batch:>7}" + "".join(f" {times[name] * 1e3:>10.2f}ms" for name in backends)
        if len(backends) == 2:
            line += f" {times['numpy'] / times['cython']:>8.2f}x"
        print(line)


if __name__ == "__main__":
    main()
