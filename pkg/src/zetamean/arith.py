"""Exact integer arithmetic-function kernels and truncated Dirichlet
convolution.

Everything here is exact: factorization runs on a smallest-prime-factor
sieve (grown on demand, read-only afterwards), convolutions use the
divisor-pair double loop, and integer-valued functions return Python ints.
The shared carrier type ``CoefficientSequence`` stores complex values so
one container serves number-theoretic and analytic weights alike.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Iterator, Tuple

import numpy as np

__all__ = [
    "CoefficientSequence",
    "factorize",
    "mobius",
    "von_mangoldt",
    "euler_phi",
    "tau_k",
    "omega",
    "truncated_tau",
    "dirichlet_convolve",
    "power_sequence",
    "log_power_sequence",
    "delta_sequence",
    "mobius_sequence",
    "von_mangoldt_sequence",
    "ones_sequence",
]

_SIEVE_LOCK = threading.Lock()
_SPF = np.zeros(2, dtype=np.int64)  # smallest prime factor, index < len


def _spf_upto(n: int) -> np.ndarray:
    """Smallest-prime-factor table covering 1..n, grown geometrically."""
    global _SPF
    if n < len(_SPF):
        return _SPF
    with _SIEVE_LOCK:
        if n < len(_SPF):
            return _SPF
        size = max(n + 1, 2 * len(_SPF), 1 << 16)
        spf = np.arange(size, dtype=np.int64)
        for p in range(2, int(math.isqrt(size - 1)) + 1):
            if spf[p] == p:
                sl = spf[p * p :: p]
                np.minimum(sl, p, out=sl)
        _SPF = spf
    return _SPF


def _check_positive(n: int) -> int:
    n = int(n)
    if n < 1:
        raise ValueError(f"argument must be a positive integer, got {n}")
    return n


def factorize(n: int) -> Tuple[Tuple[int, int], ...]:
    """Prime factorization ((p1, a1), (p2, a2), ...) with p1 < p2 < ..."""
    n = _check_positive(n)
    spf = _spf_upto(n)
    out = []
    while n > 1:
        p = int(spf[n])
        a = 0
        while n % p == 0:
            n //= p
            a += 1
        out.append((p, a))
    return tuple(out)


def omega(n: int) -> int:
    """Number of distinct prime factors."""
    return len(factorize(n))


def mobius(n: int) -> int:
    """Mobius function: (-1)^omega(n) on squarefree n, else 0."""
    f = factorize(n)
    if any(a > 1 for _, a in f):
        return 0
    return -1 if len(f) % 2 else 1


def von_mangoldt(n: int) -> float:
    """log p when n is a prime power p^a, else 0."""
    f = factorize(n)
    if len(f) == 1:
        return math.log(f[0][0])
    return 0.0


def euler_phi(n: int) -> int:
    """Euler totient."""
    result = _check_positive(n)
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def tau_k(n: int, k: int) -> int:
    """Number of ordered k-tuples of positive integers with product n.

    Multiplicative with tau_k(p^a) = C(a + k - 1, k - 1).
    """
    n = _check_positive(n)
    if int(k) < 1:
        raise ValueError("k must be a positive integer")
    result = 1
    for _, a in factorize(n):
        result *= math.comb(a + k - 1, k - 1)
    return result


@lru_cache(maxsize=None)
def truncated_tau(n: int, k: int, xi: float) -> int:
    """Ordered k-tuples with product n and every part <= xi.

    Recursive divisor descent; memoized on (n, k, xi) since desk-scale
    supports stay small.
    """
    n = _check_positive(n)
    if int(k) < 1:
        raise ValueError("k must be a positive integer")
    if k == 1:
        return 1 if n <= xi else 0
    total = 0
    for d in range(1, n + 1):
        if d > xi:
            break
        if n % d == 0:
            total += truncated_tau(n // d, k - 1, xi)
    return total


@dataclass(frozen=True)
class CoefficientSequence:
    """Finitely supported weights c(n) of a Dirichlet polynomial.

    ``values`` maps indices 1 <= n <= support_bound to complex weights;
    indices beyond the support (or absent from the map) read as zero.
    """

    support_bound: int
    values: Dict[int, complex] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self) -> None:
        if self.support_bound < 1:
            raise ValueError("support_bound must be a positive integer")
        for n in self.values:
            if not 1 <= n <= self.support_bound:
                raise ValueError(
                    f"index {n} outside declared support 1..{self.support_bound}"
                )

    def __call__(self, n: int) -> complex:
        if n > self.support_bound:
            return 0j
        return complex(self.values.get(n, 0j))

    def items(self) -> Iterator[Tuple[int, complex]]:
        """Nonzero entries in increasing index order."""
        for n in sorted(self.values):
            v = complex(self.values[n])
            if v != 0j:
                yield n, v

    def dense(self) -> np.ndarray:
        """Values as a dense array indexed 0..support_bound (entry 0 unused)."""
        arr = np.zeros(self.support_bound + 1, dtype=np.complex128)
        for n, v in self.values.items():
            arr[n] = v
        return arr


def dirichlet_convolve(
    a: CoefficientSequence, b: CoefficientSequence, bound: int
) -> CoefficientSequence:
    """Truncated Dirichlet convolution (a*b)(n) = sum_{d|n} a(d) b(n/d), n <= bound."""
    bound = _check_positive(bound)
    out: Dict[int, complex] = {}
    terms_a = list(a.items())
    terms_b = list(b.items())
    for d, av in terms_a:
        if d > bound:
            break
        for q, bv in terms_b:
            n = d * q
            if n > bound:
                break
            out[n] = out.get(n, 0j) + av * bv
    return CoefficientSequence(bound, out, label=f"({a.label}*{b.label})")


def _generated(bound: int, label: str, fn: Callable[[int], complex]) -> CoefficientSequence:
    bound = _check_positive(bound)
    vals = {n: fn(n) for n in range(1, bound + 1)}
    return CoefficientSequence(bound, {n: v for n, v in vals.items() if v != 0}, label)


def power_sequence(exponent: complex, bound: int) -> CoefficientSequence:
    """values(n) = n^exponent (principal branch; n is a positive real)."""
    e = complex(exponent)
    return _generated(bound, f"n^({e})", lambda n: cmath.exp(e * math.log(n)))


def log_power_sequence(order: int, bound: int) -> CoefficientSequence:
    """values(n) = (log n)^order; note values(1) = 0 for order >= 1."""
    if order < 0:
        raise ValueError("order must be a nonnegative integer")
    return _generated(bound, f"log^{order}", lambda n: complex(math.log(n) ** order))


def delta_sequence(bound: int = 1) -> CoefficientSequence:
    """The unit of Dirichlet convolution: 1 at n = 1, zero elsewhere."""
    return CoefficientSequence(bound, {1: 1.0 + 0j}, label="delta")


def mobius_sequence(bound: int) -> CoefficientSequence:
    """Truncated Mobius weights mu(n) for n <= bound."""
    return _generated(bound, f"mu<={bound}", lambda n: complex(mobius(n)))


def von_mangoldt_sequence(bound: int) -> CoefficientSequence:
    """Truncated von Mangoldt weights for n <= bound."""
    return _generated(bound, "Lambda", lambda n: complex(von_mangoldt(n)))


def ones_sequence(bound: int) -> CoefficientSequence:
    """All-ones weights for n <= bound (coefficients of truncated zeta)."""
    return _generated(bound, "1", lambda n: 1.0 + 0j)
