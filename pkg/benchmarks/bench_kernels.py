#!/usr/bin/env python3
"""Benchmark the compiled Dirichlet-sum kernel against the numpy fallback.

Workloads mirror the two hot paths: the Hardy-Z scan grid (many points,
truncation scaled to the height) and the derivative circles of the zero
sums (node batches at a fixed height).  Run:

    python benchmarks/bench_kernels.py
"""

import argparse
import statistics
import time

import numpy as np

from zetamean._kernels import _fallback

try:
    from zetamean._kernels import _zetacore
except ImportError:
    _zetacore = None


def _scan_workload(t_max=2000.0, step=0.05):
    t = np.arange(10.0, t_max, step)
    s = (0.5 + 1j * t).astype(np.complex128)
    n = (np.ceil(0.6 * t).astype(np.int64) + 8 + 63) // 64 * 64
    return s, n


def _circle_workload(height=2000.0, zeros=1500, nodes=64, radius=0.1):
    rng = np.random.default_rng(0)
    centres = 0.5 + 1j * np.sort(rng.uniform(14.0, height, zeros))
    ring = radius * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    s = (centres[:, None] + ring[None, :]).ravel()
    n = np.full(s.shape, ((int(0.6 * height) + 8 + 63) // 64) * 64, dtype=np.int64)
    return s, n


def _time(fn, s, n, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn(s, n)
        times.append(time.perf_counter() - start)
    return statistics.median(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    workloads = {
        "hardy-z scan grid (t <= 2000, step 0.05)": _scan_workload(),
        "derivative circles (1500 zeros x 64 nodes)": _circle_workload(),
    }
    backends = [("numpy fallback", _fallback.dirichlet_partial_sum)]
    if _zetacore is not None:
        backends.insert(0, ("compiled (cython)", _zetacore.dirichlet_partial_sum))
    else:
        print("compiled kernel not built; benchmarking the fallback alone\n")

    for label, (s, n) in workloads.items():
        print(f"{label}: {s.size} points, max truncation {int(n.max())}")
        results = {}
        reference = None
        for name, fn in backends:
            median, out = _time(fn, s, n, args.repeats)
            results[name] = median
            throughput = s.size / median / 1e3
            print(f"  {name:<18} {median * 1e3:9.1f} ms   {throughput:8.0f} kpts/s")
            if reference is None:
                reference = out
            else:
                gap = np.max(np.abs(out - reference) / (1.0 + np.abs(reference)))
                print(f"  {'agreement':<18} max relative gap {gap:.2e}")
        if len(results) == 2:
            names = list(results)
            print(f"  speedup: {results[names[1]] / results[names[0]]:.1f}x\n")
        else:
            print()


if __name__ == "__main__":
    main()
