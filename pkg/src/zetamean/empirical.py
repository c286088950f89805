"""Discrete sums over actual zeros and their comparison against the
main-term predictions.

The three sums all run over rho = 1/2 + i gamma for validated ordinates
gamma <= T, in ascending order with compensated summation:

    shifted_zero_sum      sum zeta(rho + alpha) X(rho) Y(1 - rho)
    derivative_zero_sum   sum zeta^{(m)}(rho)   X(rho) Y(1 - rho)
    moment_sum            sum |zeta^{(m)}(rho)|^{2k}

Parallelism only ever touches the per-zero term evaluation; the final
reduction is a serial Kahan loop in zero order, so results do not depend
on the worker count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Mapping, Sequence, Tuple

import numpy as np

from .arith import CoefficientSequence, mobius
from .util import format_sig, kahan_sum, kahan_sum_real
from .zeta import (
    DEFAULT_OPTIONS,
    EvaluationOptions,
    zeta_batch,
    zeta_deriv_batch,
)
from .zeros import ZeroList

__all__ = [
    "ComparisonReport",
    "MomentConfig",
    "dirichlet_poly_eval",
    "shifted_zero_sum",
    "derivative_zero_sum",
    "moment_sum",
    "mollifier_coeffs",
    "tau_xi_coeffs",
    "compare",
]

_DEVIATION_FLOOR = 1e-30
_TAU_SUPPORT_CAP = 1_000_000


@dataclass(frozen=True)
class MomentConfig:
    """Configuration of the moment-style sums built from truncated divisor
    weights: x = tau_{k-1}(., xi), y = tau_k(., xi) with N = xi^k."""

    derivative_order: int
    moment_exponent: int
    xi: float
    mollifier_poly: Tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.derivative_order < 1:
            raise ValueError("derivative_order must be >= 1")
        if self.moment_exponent < 1:
            raise ValueError("moment_exponent must be >= 1")
        if self.xi < 1:
            raise ValueError("xi must be >= 1")
        if self.mollifier_poly:
            _check_mollifier_poly(self.mollifier_poly)


def dirichlet_poly_eval(coeffs: CoefficientSequence, s) -> complex | np.ndarray:
    """X(s) = sum_{n <= N} c(n) n^{-s}; vectorized over an array of s."""
    scalar = np.isscalar(s)
    sv = np.atleast_1d(np.asarray(s, dtype=np.complex128))
    total = np.zeros(sv.shape, dtype=np.complex128)
    for n, v in coeffs.items():
        total += v * np.exp(-sv * math.log(n))
    if scalar:
        return complex(total[0])
    return total


def _require_usable(zeros: ZeroList, T: float) -> np.ndarray:
    if not zeros.validated:
        raise ValueError("zero list must be validated before summation")
    if zeros.height_covered < T:
        raise ValueError(
            f"zero list covers height {zeros.height_covered:g} < requested T = {T:g}"
        )
    return zeros.up_to(T)


def _zero_sum_terms(
    values: np.ndarray,
    x: CoefficientSequence,
    y: CoefficientSequence,
    rho: np.ndarray,
) -> np.ndarray:
    return values * dirichlet_poly_eval(x, rho) * dirichlet_poly_eval(y, 1.0 - rho)


def shifted_zero_sum(
    alpha: complex,
    T: float,
    x: CoefficientSequence,
    y: CoefficientSequence,
    zeros: ZeroList,
    opts: EvaluationOptions = DEFAULT_OPTIONS,
    threads: int | None = None,
) -> complex:
    """sum_{0 < gamma <= T} zeta(rho + alpha) X(rho) Y(1 - rho)."""
    gammas = _require_usable(zeros, T)
    if gammas.size == 0:
        return 0j
    rho = 0.5 + 1j * gammas
    vals = zeta_batch(rho + complex(alpha), opts, threads=threads)
    return kahan_sum(_zero_sum_terms(vals, x, y, rho))


def derivative_zero_sum(
    m: int,
    T: float,
    x: CoefficientSequence,
    y: CoefficientSequence,
    zeros: ZeroList,
    opts: EvaluationOptions = DEFAULT_OPTIONS,
    threads: int | None = None,
) -> complex:
    """sum_{0 < gamma <= T} zeta^{(m)}(rho) X(rho) Y(1 - rho), m >= 1."""
    if m < 1:
        raise ValueError("m must be >= 1 (use shifted_zero_sum for m = 0)")
    gammas = _require_usable(zeros, T)
    if gammas.size == 0:
        return 0j
    rho = 0.5 + 1j * gammas
    vals = zeta_deriv_batch(rho, m, opts, threads=threads)
    return kahan_sum(_zero_sum_terms(vals, x, y, rho))


def moment_sum(
    m: int,
    k: int,
    T: float,
    zeros: ZeroList,
    opts: EvaluationOptions = DEFAULT_OPTIONS,
    threads: int | None = None,
) -> float:
    """sum_{0 < gamma <= T} |zeta^{(m)}(rho)|^{2k} (nonnegative, ascending order)."""
    if m < 1 or k < 1:
        raise ValueError("m and k must be >= 1")
    gammas = _require_usable(zeros, T)
    if gammas.size == 0:
        return 0.0
    rho = 0.5 + 1j * gammas
    vals = zeta_deriv_batch(rho, m, opts, threads=threads)
    return kahan_sum_real(np.abs(vals) ** (2 * k))


def _check_mollifier_poly(coeffs: Sequence[float]) -> np.polynomial.Polynomial:
    poly = np.polynomial.Polynomial(list(coeffs))
    if abs(poly(0.0)) > 1e-12 or abs(poly(1.0) - 1.0) > 1e-12:
        raise ValueError(
            f"mollifier polynomial must satisfy P(0) = 0 and P(1) = 1, got "
            f"P(0) = {poly(0.0):g}, P(1) = {poly(1.0):g}"
        )
    return poly


def mollifier_coeffs(N: int, poly_coeffs: Sequence[float]) -> CoefficientSequence:
    """Mollifier weights x(n) = mu(n) P(log(N/n) / log N) for n <= N.

    P is given by ascending coefficients and must satisfy P(0) = 0 and
    P(1) = 1.  The degenerate length N = 1 reduces to the delta sequence.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    poly = _check_mollifier_poly(poly_coeffs)
    if N == 1:
        return CoefficientSequence(1, {1: 1.0 + 0j}, label="mollifier[1]")
    log_n = math.log(N)
    values = {}
    for n in range(1, N + 1):
        mu = mobius(n)
        if mu == 0:
            continue
        v = mu * poly(math.log(N / n) / log_n)
        if v != 0.0:
            values[n] = complex(v)
    return CoefficientSequence(N, values, label=f"mollifier[{N}]")


def tau_xi_coeffs(k: int, xi: float) -> CoefficientSequence:
    """Truncated k-fold divisor weights: values(n) = tau_k(n, xi) with
    support bound floor(xi)^k (rejected above 1e6)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if xi < 1:
        raise ValueError("xi must be >= 1")
    base = int(math.floor(xi))
    bound = base**k
    if bound > _TAU_SUPPORT_CAP:
        raise ValueError(
            f"support bound floor(xi)^k = {bound} exceeds the cap {_TAU_SUPPORT_CAP}"
        )
    # k-fold truncated convolution of the ones-up-to-xi sequence; exact
    # integers, and identical to the per-n divisor descent
    values = {1: 1}
    for _ in range(k):
        nxt: Dict[int, int] = {}
        for a, va in values.items():
            for d in range(1, base + 1):
                n = a * d
                if n > bound:
                    break
                nxt[n] = nxt.get(n, 0) + va
        values = nxt
    return CoefficientSequence(
        bound,
        {n: complex(v) for n, v in sorted(values.items())},
        label=f"tau_{k}(.,{xi:g})",
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Empirical sums against predictions across a strictly increasing
    height grid, with per-height complex ratio and relative deviation
    (deviation = |emp - pred| / max(|pred|, 1e-30))."""

    heights: Tuple[float, ...]
    empirical: Tuple[complex, ...]
    predicted: Tuple[complex, ...]
    configuration: Dict[str, str]

    def __post_init__(self) -> None:
        if len(self.heights) != len(self.empirical) or len(self.heights) != len(
            self.predicted
        ):
            raise ValueError("heights, empirical, predicted must align")
        if any(b <= a for a, b in zip(self.heights, self.heights[1:])):
            raise ValueError("height grid must be strictly increasing")

    @property
    def ratios(self) -> Tuple[complex, ...]:
        return tuple(
            e / p if p != 0 else complex(float("nan"), float("nan"))
            for e, p in zip(self.empirical, self.predicted)
        )

    @property
    def deviations(self) -> Tuple[float, ...]:
        return tuple(
            abs(e - p) / max(abs(p), _DEVIATION_FLOOR)
            for e, p in zip(self.empirical, self.predicted)
        )

    def rows(self):
        for T, e, p, r, d in zip(
            self.heights, self.empirical, self.predicted, self.ratios, self.deviations
        ):
            yield {
                "T": T,
                "emp_re": e.real,
                "emp_im": e.imag,
                "pred_re": p.real,
                "pred_im": p.imag,
                "ratio_re": r.real,
                "ratio_im": r.imag,
                "deviation": d,
            }

    def to_csv(self, path) -> None:
        header = "T,emp_re,emp_im,pred_re,pred_im,ratio_re,ratio_im,deviation"
        lines = [header]
        for row in self.rows():
            lines.append(",".join(format_sig(row[c]) for c in header.split(",")))
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    def to_json_dict(self) -> dict:
        return {
            "configuration": dict(self.configuration),
            "rows": list(self.rows()),
        }

    def to_json(self, path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(), indent=2) + "\n", encoding="utf-8"
        )


def compare(
    empirical: Mapping[float, complex],
    predicted: Mapping[float, complex],
    configuration: Mapping[str, str] | None = None,
) -> ComparisonReport:
    """Assemble a ComparisonReport from two series on the same height grid."""
    grid_e = tuple(sorted(empirical))
    grid_p = tuple(sorted(predicted))
    if grid_e != grid_p:
        raise ValueError(f"height grids differ: {grid_e} vs {grid_p}")
    return ComparisonReport(
        heights=grid_e,
        empirical=tuple(complex(empirical[t]) for t in grid_e),
        predicted=tuple(complex(predicted[t]) for t in grid_e),
        configuration=dict(configuration or {}),
    )
