"""Laurent and Taylor coefficients of zeta near s = 1, plus the Stirling /
polylogarithm identities used by every derivative formula.

The expansions in play, for small a:

    zeta(1 - a)        = -1/a + sum_{u>=0} (gamma_u / u!) a^u
    zeta'/zeta(1 + a)  = -1/a - sum_{n>=0} eta_n a^n

gamma_u are the Stieltjes constants; eta_n follow from the gamma_u by an
exact recurrence.  The constants are computed once at import of the table
(Euler-Maclaurin accelerated limit sums, evaluated in high precision and
stored as doubles) and are immutable afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import mpmath as mp

__all__ = [
    "ExpansionTable",
    "default_table",
    "stieltjes_gamma",
    "tilde_gamma",
    "eta",
    "stirling2",
    "polylog_neg",
    "MAX_ORDER",
]

MAX_ORDER = 12


def _stieltjes_limit_sums(max_order: int, cutoff: int = 1200, pairs: int = 18):
    """Stieltjes constants by Euler-Maclaurin acceleration of

        gamma_u = lim_M [ sum_{n<=M} log^u(n)/n - log^{u+1}(M)/(u+1) ]

    For f(x) = log^u(x)/x the derivatives are f^(r)(x) = x^{-1-r} P_r(log x)
    with P_0(L) = L^u and P_{r+1} = P_r' - (r+1) P_r, so the boundary terms
    of the Euler-Maclaurin formula are exact polynomials in log(cutoff).
    Evaluated at 40 significant digits; the double rounding at the end is
    the only precision loss.
    """
    with mp.workdps(40):
        logs = [mp.log(n) for n in range(1, cutoff + 1)]
        log_m = logs[-1]
        out = []
        for u in range(max_order + 1):
            partial = mp.fsum(logs[n - 1] ** u / n for n in range(1, cutoff + 1))
            value = partial - log_m ** (u + 1) / (u + 1)
            value -= (log_m**u) / (2 * cutoff)
            # polynomial coefficients of P_r in powers of log x
            coeffs = [mp.mpf(0)] * u + [mp.mpf(1)]
            r = 0
            for j in range(1, pairs + 1):
                while r < 2 * j - 1:
                    deriv = [(i + 1) * coeffs[i + 1] for i in range(len(coeffs) - 1)]
                    deriv.append(mp.mpf(0))
                    coeffs = [deriv[i] - (r + 1) * coeffs[i] for i in range(len(coeffs))]
                    r += 1
                boundary = mp.fsum(
                    coeffs[i] * log_m**i for i in range(len(coeffs))
                ) / mp.mpf(cutoff) ** (r + 1)
                value -= mp.bernoulli(2 * j) / mp.factorial(2 * j) * boundary
            out.append(float(value))
        return tuple(out)


def _eta_from_gammas(gammas: Tuple[float, ...]) -> Tuple[float, ...]:
    """Taylor coefficients of -zeta'/zeta(1+a) - 1/a via the recurrence

        eta_n = -(-1)^n [ (n+1) gamma_n / n!
                          + sum_{k<n} (-1)^{k-1} eta_k gamma_{n-k-1} / (n-k-1)! ]

    evaluated in the stored double-precision gamma_u so the table satisfies
    the recurrence exactly as floats.
    """
    etas: list[float] = []
    for n in range(len(gammas)):
        acc = (n + 1) * gammas[n] / math.factorial(n)
        for k in range(n):
            acc += (-1) ** (k - 1) / math.factorial(n - k - 1) * etas[k] * gammas[n - k - 1]
        etas.append(-((-1) ** n) * acc)
    return tuple(etas)


@dataclass(frozen=True)
class ExpansionTable:
    """Immutable table of gamma_u, tilde-gamma_u and eta_u up to max_order."""

    stieltjes: Tuple[float, ...]
    eta: Tuple[float, ...]
    max_order: int
    precision_note: str

    @property
    def tilde_gamma(self) -> Tuple[float, ...]:
        """tilde-gamma_{-1} .. tilde-gamma_{max_order}; entry 0 is u = -1."""
        return (-1.0,) + tuple(
            g / math.factorial(u) for u, g in enumerate(self.stieltjes)
        )

    def gamma(self, u: int) -> float:
        if not 0 <= u <= self.max_order:
            raise ValueError(f"gamma_u supported for 0 <= u <= {self.max_order}")
        return self.stieltjes[u]

    def tilde(self, u: int) -> float:
        if u < -1:
            raise ValueError("tilde_gamma defined for u >= -1")
        if u == -1:
            return -1.0
        return self.gamma(u) / math.factorial(u)

    def eta_coeff(self, n: int) -> float:
        if not 0 <= n <= self.max_order:
            raise ValueError(f"eta_n supported for 0 <= n <= {self.max_order}")
        return self.eta[n]


@lru_cache(maxsize=None)
def default_table(max_order: int = MAX_ORDER) -> ExpansionTable:
    """The shared constants table (built once, then read-only)."""
    gammas = _stieltjes_limit_sums(max_order)
    return ExpansionTable(
        stieltjes=gammas,
        eta=_eta_from_gammas(gammas),
        max_order=max_order,
        precision_note=(
            "Euler-Maclaurin limit sums at 40 significant digits, "
            "rounded once to IEEE doubles"
        ),
    )


def stieltjes_gamma(u: int) -> float:
    """Stieltjes constant gamma_u (12+ correct digits for u <= 12)."""
    return default_table().gamma(u)


def tilde_gamma(u: int) -> float:
    """Coefficient of a^u in zeta(1-a): -1 at u = -1, gamma_u/u! for u >= 0."""
    return default_table().tilde(u)


def eta(n: int) -> float:
    """Coefficient eta_n of the expansion zeta'/zeta(1+a) = -1/a - sum eta_n a^n."""
    return default_table().eta_coeff(n)


@lru_cache(maxsize=None)
def stirling2(j: int, k: int) -> int:
    """Stirling number of the second kind S(j, k)."""
    if j < 0 or k < 0:
        raise ValueError("stirling2 requires nonnegative arguments")
    if j == 0 and k == 0:
        return 1
    if j == 0 or k == 0 or k > j:
        return 0
    return k * stirling2(j - 1, k) + stirling2(j - 1, k - 1)


def polylog_neg(j: int, z: complex) -> complex:
    """Li_{-j}(z) = sum_{l>=1} l^j z^l for |z| < 1, via the rational closed form

        Li_{-j}(z) = sum_{k=0}^{j} k! S(j+1, k+1) (z / (1-z))^{k+1}.
    """
    if j < 0:
        raise ValueError("polylog_neg expects the order j >= 0 of Li_{-j}")
    z = complex(z)
    if abs(z) >= 1.0:
        raise ValueError("polylog_neg requires |z| < 1 (series boundary)")
    w = z / (1.0 - z)
    total = 0j
    wpow = w
    for k in range(j + 1):
        total += math.factorial(k) * stirling2(j + 1, k + 1) * wpow
        wpow *= w
    return total
