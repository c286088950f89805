"""Small shared helpers: worker resolution, deterministic chunked maps,
compensated summation, and fixed-precision number formatting."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

# Fixed chunk size for parallel batch evaluation.  Chunk boundaries are a
# function of the input length only, never of the worker count, so results
# are schedule-independent.
CHUNK = 4096


def resolve_threads(threads: int | None = None) -> int:
    """Worker count: explicit argument, else ZETAMEAN_THREADS, else CPU count."""
    if threads is not None:
        if threads < 1:
            raise ValueError("threads must be >= 1")
        return threads
    env = os.environ.get("ZETAMEAN_THREADS", "").strip()
    if env:
        n = int(env)
        if n < 1:
            raise ValueError("ZETAMEAN_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def chunked_eval(
    fn: Callable[[np.ndarray], np.ndarray],
    points: np.ndarray,
    threads: int | None = None,
    out_dtype=np.complex128,
) -> np.ndarray:
    """Apply ``fn`` to fixed-size chunks of ``points``, possibly in parallel.

    Each chunk result lands at its own offset, so the output is identical
    for any worker count.
    """
    points = np.asarray(points)
    out = np.empty(points.shape[0], dtype=out_dtype)
    nthreads = resolve_threads(threads)
    spans = [(lo, min(lo + CHUNK, points.shape[0])) for lo in range(0, points.shape[0], CHUNK)]
    if nthreads == 1 or len(spans) <= 1:
        for lo, hi in spans:
            out[lo:hi] = fn(points[lo:hi])
        return out
    with ThreadPoolExecutor(max_workers=nthreads) as pool:
        futures = [(lo, hi, pool.submit(fn, points[lo:hi])) for lo, hi in spans]
        for lo, hi, fut in futures:
            out[lo:hi] = fut.result()
    return out


def kahan_sum(terms: Sequence[complex]) -> complex:
    """Compensated (Kahan) summation in the given term order."""
    total = 0j
    comp = 0j
    for term in terms:
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def kahan_sum_real(terms: Sequence[float]) -> float:
    total = 0.0
    comp = 0.0
    for term in terms:
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def format_sig(x: float, digits: int = 12) -> str:
    """Format with a fixed number of significant digits (CSV contract)."""
    return f"{x:.{digits - 1}e}"
