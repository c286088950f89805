"""Explicit main-term formulas for discrete zero sums of zeta.

Two assembled predictions are exposed, together with every building block:

* ``shifted_mean_main_term(alpha, T, x, y)`` predicts
  sum_{0 < gamma <= T} zeta(rho + alpha) X(rho) Y(1 - rho), where X and Y
  are the Dirichlet polynomials generated by the coefficient sequences
  x and y.  Its three pieces are a log-weighted diagonal, a von Mangoldt
  diagonal, and a double sum of per-pair kernels F over coprime (h, k).

* ``derivative_mean_main_term(m, T, x, y)`` predicts the same sum with
  zeta^{(m)}(rho) in place of zeta(rho + alpha); it is the m-th alpha
  derivative of the first prediction at alpha = 0, expressed through two
  monic polynomial families (in log(T/2pi) and log h), a prime-power term
  and a composite secondary term.

All evaluation points sit near s = 1, so these formulas are cheap; the
zeta engine is injected so empirical comparisons can share one kernel.
"""

from __future__ import annotations

import cmath
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import quad

from .arith import (
    CoefficientSequence,
    dirichlet_convolve,
    euler_phi,
    factorize,
    log_power_sequence,
    power_sequence,
    von_mangoldt,
    von_mangoldt_sequence,
)
from .constants import default_table, polylog_neg
from .zeta import DEFAULT_OPTIONS, EngineError, EvaluationOptions, zeta, zeta_deriv

__all__ = [
    "PoleError",
    "ShiftParameters",
    "MainTermReport",
    "euler_factor",
    "shifted_zeta_ratio",
    "pair_kernel",
    "pair_kernel_by_shift_derivative",
    "pair_kernel_derivative",
    "height_polynomial",
    "offset_polynomial",
    "log_composition_sum",
    "prime_power_kernel_term",
    "composite_kernel_term",
    "shifted_mean_main_term",
    "derivative_mean_main_term",
    "shift_bound",
]

TWO_PI = 2.0 * math.pi


class PoleError(ValueError):
    """Evaluation requested at a non-removable pole."""


def shift_bound(t_height: float) -> float:
    """Largest admissible |alpha| when predicting up to height T."""
    return 1.0 / (15.0 * math.log(t_height))


@dataclass(frozen=True)
class ShiftParameters:
    """Shift and derivative-order bundle for main-term evaluation.

    ``g_shift`` is the auxiliary shift of the ratio product (it only
    enters the cross-check route); ``alpha`` is constrained by
    |alpha| <= 1/(15 log T) whenever a height is attached.
    """

    alpha: complex = 0j
    g_shift: complex = 0j
    derivative_order: int = 0

    def __post_init__(self) -> None:
        if self.derivative_order < 0:
            raise ValueError("derivative_order must be >= 0")

    def check_height(self, t_height: float) -> None:
        if abs(self.alpha) > shift_bound(t_height):
            raise ValueError(
                f"|alpha| = {abs(self.alpha):.3e} exceeds 1/(15 log T) = "
                f"{shift_bound(t_height):.3e} at T = {t_height:g}"
            )


@dataclass(frozen=True)
class MainTermReport:
    """Evaluated main-term prediction with its per-piece breakdown."""

    height: float
    script_l: float
    pieces: Dict[str, complex]
    total: complex
    parameters: ShiftParameters
    coefficient_labels: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "height": self.height,
            "script_l": self.script_l,
            "pieces": {k: [v.real, v.imag] for k, v in self.pieces.items()},
            "total": [self.total.real, self.total.imag],
            "parameters": {
                "alpha": [self.parameters.alpha.real, self.parameters.alpha.imag],
                "g_shift": [
                    self.parameters.g_shift.real,
                    self.parameters.g_shift.imag,
                ],
                "derivative_order": self.parameters.derivative_order,
            },
            "coefficient_labels": list(self.coefficient_labels),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)


def _report(height, pieces, parameters, labels) -> MainTermReport:
    total = sum(pieces.values(), start=0j)
    return MainTermReport(
        height=float(height),
        script_l=math.log(height / TWO_PI),
        pieces=pieces,
        total=total,
        parameters=parameters,
        coefficient_labels=tuple(labels),
    )


# --- elementary factors -------------------------------------------------------


def euler_factor(s: complex, k: int) -> complex:
    """prod_{p | k} (1 - p^{-s}); the empty product (k = 1) is 1."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    out = 1.0 + 0j
    for p, _ in factorize(k):
        out *= 1.0 - cmath.exp(-complex(s) * math.log(p))
    return out


def shifted_zeta_ratio(
    alpha: complex,
    g_shift: complex,
    h: int,
    k: int,
    zeta_fn: Optional[Callable[[complex], complex]] = None,
) -> complex:
    """h^{-a} k^{-g} (zeta(1+a+g)/zeta(1+a)) prod_{p|k} (1-p^g)/(1-p^{-1-a}).

    At a = 0 (g != 0) the 1/zeta(1+a) pole forces the value 0; the
    doubly-degenerate point a = g = 0 and the non-removable pole at
    a + g = 0 (a != 0) are rejected.
    """
    if h < 1 or k < 1:
        raise ValueError("h and k must be positive integers")
    a = complex(alpha)
    g = complex(g_shift)
    if a == 0 and g == 0:
        raise PoleError("shifted_zeta_ratio needs alpha != 0 or g_shift != 0")
    if a == 0:
        return 0j
    if a + g == 0:
        raise PoleError(
            f"zeta pole at 1 + alpha + g_shift = 1 (alpha = {a}, g_shift = {g})"
        )
    zf = zeta_fn or zeta
    value = (
        cmath.exp(-a * math.log(h))
        * cmath.exp(-g * math.log(k))
        * zf(1.0 + a + g)
        / zf(1.0 + a)
    )
    for p, _ in factorize(k):
        value *= (1.0 - cmath.exp(g * math.log(p))) / (
            1.0 - cmath.exp(-(1.0 + a) * math.log(p))
        )
    return value


def _log_deriv_zeta(alpha: complex, opts: EvaluationOptions) -> complex:
    """zeta'/zeta(1 + alpha) with a Cauchy circle kept clear of the pole."""
    s = 1.0 + complex(alpha)
    radius = min(opts.derivative_radius, 0.45 * abs(complex(alpha)))
    circle_opts = EvaluationOptions(
        euler_maclaurin_terms=opts.euler_maclaurin_terms,
        bernoulli_order=opts.bernoulli_order,
        derivative_radius=radius,
        derivative_nodes=opts.derivative_nodes,
    )
    return zeta_deriv(s, 1, circle_opts) / zeta(s, opts)


def pair_kernel(
    alpha: complex,
    h: int,
    k: int,
    T: float,
    zeta_fn: Optional[Callable[[complex], complex]] = None,
    opts: EvaluationOptions = DEFAULT_OPTIONS,
) -> complex:
    """Per-pair kernel F of the shifted mean-value prediction:

        (T/2pi) [ 1_{k=1} h^{-a} zeta'/zeta(1+a)
                  - Lambda(k) / (h^a Phi(1+a, k))
                  - (k/phi(k)) Phi(a, k) zeta(1-a) (T/2pi k)^{-a} / (1-a) ]

    with Phi = ``euler_factor``.  alpha = 0 is the analytic limit and is
    served by the closed-form derivative at order 0; alpha = 1 is rejected.
    """
    if h < 1 or k < 1:
        raise ValueError("h and k must be positive integers")
    if T <= 0:
        raise ValueError("T must be positive")
    a = complex(alpha)
    if a == 1:
        raise PoleError("pair_kernel rejects alpha = 1 (zeta(1-alpha) pole)")
    if a == 0:
        return complex(pair_kernel_derivative(0, h, k, T))
    zf = zeta_fn or (lambda s: zeta(s, opts))
    pieces = 0j
    if k == 1:
        if zeta_fn is None:
            ratio = _log_deriv_zeta(a, opts)
        else:
            # derive the ratio from the injected oracle by a small circle
            r = 0.45 * abs(a)
            nodes = opts.derivative_nodes
            acc = 0j
            for j in range(nodes):
                w = cmath.exp(2j * math.pi * j / nodes)
                acc += zf(1.0 + a + r * w) / w
            ratio = acc / (nodes * r) / zf(1.0 + a)
        pieces += cmath.exp(-a * math.log(h)) * ratio
    lam = von_mangoldt(k)
    if lam:
        pieces -= lam / (cmath.exp(a * math.log(h)) * euler_factor(1.0 + a, k))
    pieces -= (
        (k / euler_phi(k))
        * euler_factor(a, k)
        * zf(1.0 - a)
        * cmath.exp(-a * math.log(T / (TWO_PI * k)))
        / (1.0 - a)
    )
    return (T / TWO_PI) * pieces


def _complex_quad(fn: Callable[[float], complex], a: float, b: float) -> complex:
    re, re_err = quad(lambda t: fn(t).real, a, b, limit=200)
    im, im_err = quad(lambda t: fn(t).imag, a, b, limit=200)
    value = complex(re, im)
    if max(re_err, im_err) > 1e-8 * (1.0 + abs(value)):
        raise EngineError(
            f"quadrature did not converge: error estimate {max(re_err, im_err):.3e}"
        )
    return value


def pair_kernel_by_shift_derivative(
    alpha: complex,
    h: int,
    k: int,
    T: float,
    step: float = 1e-4,
    zeta_fn: Optional[Callable[[complex], complex]] = None,
) -> complex:
    """Cross-check route for the pair kernel: conj of the g-derivative at 0 of

        (1/2pi) int_0^T [ Z(conj(a), g) + (t/2pi)^{-conj(a)-g} Z(-g, -conj(a)) ] dt

    where Z is ``shifted_zeta_ratio`` at (h, k).  The t-integral runs
    through adaptive quadrature, the g-derivative through a four-point
    central difference of width ``step``.
    """
    if step <= 0 or step > 1e-3:
        raise ValueError("step must lie in (0, 1e-3]")
    ab = complex(alpha).conjugate()

    def g_integral(g: complex) -> complex:
        z1 = shifted_zeta_ratio(ab, g, h, k, zeta_fn)
        z2 = shifted_zeta_ratio(-g, -ab, h, k, zeta_fn)
        c = -(ab + g)
        integrand = lambda t: z1 + z2 * cmath.exp(c * math.log(t / TWO_PI))
        return _complex_quad(integrand, 0.0, T) / TWO_PI

    d = (
        g_integral(-2 * step)
        - 8 * g_integral(-step)
        + 8 * g_integral(step)
        - g_integral(2 * step)
    ) / (12 * step)
    return d.conjugate()


# --- polynomial families and derivative closed forms --------------------------


def height_polynomial(m: int) -> Polynomial:
    """Monic degree-(m+1) polynomial evaluated at log(T/2pi) in the
    derivative main term:

        x^{m+1} + (-1)^{m+1} (m+1)! sum_{u<=m} ((-1)^u x^u / u!)
                                     (1 - sum_{v<=m-u} gamma_v / v!)
    """
    table = default_table()
    if m + 1 > table.max_order:
        raise ValueError(f"order m = {m} exceeds the constants table")
    if m < 0:
        raise ValueError("m must be >= 0")
    coeffs = np.zeros(m + 2)
    coeffs[m + 1] = 1.0
    sign = (-1.0) ** (m + 1) * math.factorial(m + 1)
    for u in range(m + 1):
        inner = 1.0 - sum(
            table.gamma(v) / math.factorial(v) for v in range(m - u + 1)
        )
        coeffs[u] += sign * (-1.0) ** u / math.factorial(u) * inner
    return Polynomial(coeffs)


def offset_polynomial(m: int) -> Polynomial:
    """Monic degree-(m+1) polynomial evaluated at log h:

        x^{m+1} + (-1)^{m+1} (m+1)! sum_{u<=m} ((-1)^u eta_{m-u} / u!) x^u
    """
    table = default_table()
    if m + 1 > table.max_order:
        raise ValueError(f"order m = {m} exceeds the constants table")
    if m < 0:
        raise ValueError("m must be >= 0")
    coeffs = np.zeros(m + 2)
    coeffs[m + 1] = 1.0
    sign = (-1.0) ** (m + 1) * math.factorial(m + 1)
    for u in range(m + 1):
        coeffs[u] += sign * (-1.0) ** u / math.factorial(u) * table.eta_coeff(m - u)
    return Polynomial(coeffs)


def log_composition_sum(u: int, k: int) -> float:
    """(-1)^u sum over compositions l_1+...+l_w = u (each l_i >= 1) of
    prod log^{l_i}(p_i) / l_i!, over the distinct primes p_i of k; zero
    when u < omega(k)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if u < 1:
        raise ValueError("u must be >= 1")
    logs = [math.log(p) for p, _ in factorize(k)]
    w = len(logs)
    if u < w:
        return 0.0

    def rec(i: int, rem: int) -> float:
        if i == w - 1:
            return logs[i] ** rem / math.factorial(rem)
        total = 0.0
        for l in range(1, rem - (w - 1 - i) + 1):
            total += logs[i] ** l / math.factorial(l) * rec(i + 1, rem - l)
        return total

    return (-1.0) ** u * rec(0, u)


def prime_power_kernel_term(m: int, h: int, k: int) -> float:
    """Derivative contribution of the von Mangoldt part of the pair kernel:
    nonzero only on prime powers k = p^a, where it equals

        log^m(h) log p + sum_{u=0}^{m} C(m, u) log^{m-u}(h) log^{u+1}(p) Li_{-u}(1/p).
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if k < 2:
        raise ValueError("k must be >= 2")
    fac = factorize(k)
    if len(fac) != 1:
        return 0.0
    p = fac[0][0]
    lp, lh = math.log(p), math.log(h)
    total = lh**m * lp
    for u in range(m + 1):
        total += (
            math.comb(m, u)
            * lh ** (m - u)
            * lp ** (u + 1)
            * polylog_neg(u, 1.0 / p).real
        )
    return total


def composite_kernel_term(m: int, k: int, T: float) -> float:
    """Derivative contribution of the zeta(1-a) part of the pair kernel:

        m! (k/phi(k)) (-1)^{omega(k)+1}
           sum_{u1+u2<=m, u1>=omega(k)-1} G_{u1+1}(k) ((-1)^{u2}/u2!)
               log^{u2}(T/2pi k) sum_{j=-1}^{m-u1-u2-1} tilde-gamma_j

    and zero once omega(k) >= m + 2.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if k < 2:
        raise ValueError("k must be >= 2")
    if T < 2:
        raise ValueError("T must be >= 2")
    table = default_table()
    w = len(factorize(k))
    if w >= m + 2:
        return 0.0
    log_tk = math.log(T / (TWO_PI * k))
    total = 0.0
    for u1 in range(max(0, w - 1), m + 1):
        g_val = log_composition_sum(u1 + 1, k)
        if g_val == 0.0:
            continue
        for u2 in range(0, m - u1 + 1):
            tilde_sum = sum(table.tilde(j) for j in range(-1, m - u1 - u2))
            total += (
                g_val
                * (-1.0) ** u2
                / math.factorial(u2)
                * log_tk**u2
                * tilde_sum
            )
    return math.factorial(m) * (k / euler_phi(k)) * (-1.0) ** (w + 1) * total


def pair_kernel_derivative(m: int, h: int, k: int, T: float) -> float:
    """Closed form of d^m/da^m of the pair kernel at a = 0:

        k = 1:  (T/2pi) (-1)^{m+1}/(m+1) (P_{m+1}(log T/2pi) - Q_{m+1}(log h))
        k >= 2: (T/2pi) ((-1)^{m+1} A_m(h, k) + B_m(k, T))

    with P/Q the two polynomial families and A/B the prime-power and
    composite kernel terms.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if h < 1 or k < 1:
        raise ValueError("h and k must be positive integers")
    if T < 2:
        raise ValueError("T must be >= 2")
    sign = (-1.0) ** (m + 1)
    if k == 1:
        script_l = math.log(T / TWO_PI)
        value = (
            sign
            / (m + 1)
            * (height_polynomial(m)(script_l) - offset_polynomial(m)(math.log(h)))
        )
    else:
        value = sign * prime_power_kernel_term(m, h, k) + composite_kernel_term(
            m, k, T
        )
    return (T / TWO_PI) * value


# --- assembled predictions ----------------------------------------------------


def _coefficient_frame(x: CoefficientSequence, y: CoefficientSequence, T: float):
    """Common support bound plus the T-vs-N support warning."""
    n_bound = max(x.support_bound, y.support_bound)
    if n_bound >= T**0.49:
        warnings.warn(
            f"coefficient support N = {n_bound} is large against T = {T:g} "
            "(N < sqrt(T) expected); the prediction degrades",
            stacklevel=3,
        )
    return n_bound


def _diagonal_sum(seq: CoefficientSequence, y: CoefficientSequence, bound: int) -> complex:
    """sum_{n <= bound} seq(n) y(n) / n."""
    total = 0j
    for n, v in y.items():
        if n > bound:
            break
        total += seq(n) * v / n
    return total


def _pair_sums(
    x: CoefficientSequence,
    y: CoefficientSequence,
    bound: int,
    kernel: Callable[[int, int], complex],
    k_from: int = 1,
) -> complex:
    """sum_g sum_{h,k <= N/g, (h,k)=1, k >= k_from} y(gh) x(gk) / (gkh) K(h, k).

    Kernel values are cached on (h, k); the g-loop only touches indices
    inside the coefficient supports.
    """
    cache: Dict[tuple, complex] = {}
    total = 0j
    for g in range(1, bound + 1):
        top = bound // g
        h_terms = [
            (h, y(g * h)) for h in range(1, top + 1) if y(g * h) != 0
        ]
        k_terms = [
            (k, x(g * k)) for k in range(k_from, top + 1) if x(g * k) != 0
        ]
        if not h_terms or not k_terms:
            continue
        for h, yv in h_terms:
            for k, xv in k_terms:
                if math.gcd(h, k) != 1:
                    continue
                key = (h, k)
                if key not in cache:
                    cache[key] = kernel(h, k)
                total += yv * xv / (g * k * h) * cache[key]
    return total


def shifted_mean_main_term(
    alpha: complex,
    T: float,
    x: CoefficientSequence,
    y: CoefficientSequence,
    zeta_fn: Optional[Callable[[complex], complex]] = None,
    opts: EvaluationOptions = DEFAULT_OPTIONS,
) -> MainTermReport:
    """Main-term prediction for sum_{0<gamma<=T} zeta(rho+alpha) X(rho) Y(1-rho).

    Pieces: (T/2pi) log(T/2pi e) sum (s_{-a}*x)(n) y(n) / n, minus
    (T/2pi) sum (Lambda*s_{-a}*x)(n) y(n) / n, plus the coprime pair sum of
    the per-pair kernels.  The error term of the underlying asymptotic is
    excluded by construction.
    """
    if T < 2:
        raise ValueError("T must be >= 2")
    a = complex(alpha)
    params = ShiftParameters(alpha=a)
    params.check_height(T)
    n_bound = _coefficient_frame(x, y, T)

    shift_seq = power_sequence(-a, n_bound)
    conv_shift_x = dirichlet_convolve(shift_seq, x, n_bound)
    lam_conv = dirichlet_convolve(von_mangoldt_sequence(n_bound), conv_shift_x, n_bound)

    log_diag = (T / TWO_PI) * math.log(T / (TWO_PI * math.e)) * _diagonal_sum(
        conv_shift_x, y, n_bound
    )
    lam_diag = -(T / TWO_PI) * _diagonal_sum(lam_conv, y, n_bound)
    pair = _pair_sums(
        x,
        y,
        n_bound,
        kernel=lambda h, k: pair_kernel(a, h, k, T, zeta_fn=zeta_fn, opts=opts),
    )
    pieces = {
        "log_diagonal": log_diag,
        "vonmangoldt_diagonal": lam_diag,
        "pair_kernels": pair,
    }
    return _report(T, pieces, params, (x.label, y.label))


def derivative_mean_main_term(
    m: int,
    T: float,
    x: CoefficientSequence,
    y: CoefficientSequence,
) -> MainTermReport:
    """Main-term prediction for sum_{0<gamma<=T} zeta^{(m)}(rho) X(rho) Y(1-rho),
    m >= 1: the m-th alpha-derivative of the shifted prediction at alpha = 0.

    Pieces: the polynomial (P, Q) pair sum over k = 1, the log^m diagonal,
    the von Mangoldt diagonal, and the prime-power/composite pair sum over
    k >= 2.
    """
    if m < 1:
        raise ValueError("m must be >= 1 (use the shifted form at alpha = 0)")
    if T < 2:
        raise ValueError("T must be >= 2")
    params = ShiftParameters(derivative_order=m)
    n_bound = _coefficient_frame(x, y, T)
    sign = (-1.0) ** (m + 1)
    script_l = math.log(T / TWO_PI)

    p_poly = height_polynomial(m)
    q_poly = offset_polynomial(m)
    pq = 0j
    for g in range(1, n_bound + 1):
        xv = x(g)
        if xv == 0:
            continue
        for h in range(1, n_bound // g + 1):
            yv = y(g * h)
            if yv == 0:
                continue
            pq += yv * xv / (g * h) * (p_poly(script_l) - q_poly(math.log(h)))
    pq_piece = sign / (m + 1) * (T / TWO_PI) * pq

    log_seq = log_power_sequence(m, n_bound)
    log_conv = dirichlet_convolve(log_seq, x, n_bound)
    lam_conv = dirichlet_convolve(von_mangoldt_sequence(n_bound), log_conv, n_bound)
    log_diag = (
        (-1.0) ** m
        * (T / TWO_PI)
        * math.log(T / (TWO_PI * math.e))
        * _diagonal_sum(log_conv, y, n_bound)
    )
    lam_diag = sign * (T / TWO_PI) * _diagonal_sum(lam_conv, y, n_bound)

    pair = (T / TWO_PI) * _pair_sums(
        x,
        y,
        n_bound,
        kernel=lambda h, k: complex(
            sign * prime_power_kernel_term(m, h, k) + composite_kernel_term(m, k, T)
        ),
        k_from=2,
    )
    pieces = {
        "pq_polynomials": pq_piece,
        "log_diagonal": log_diag,
        "vonmangoldt_diagonal": lam_diag,
        "prime_power_composite": pair,
    }
    return _report(T, pieces, params, (x.label, y.label))
