"""Zero-sum accumulator tests: evaluation identities, summation contracts,
coefficient generators, and comparison reports."""

import math

import numpy as np
import pytest

from zetamean.arith import (
    CoefficientSequence,
    delta_sequence,
    mobius,
    mobius_sequence,
    tau_k,
    truncated_tau,
)
from zetamean.empirical import (
    ComparisonReport,
    MomentConfig,
    compare,
    derivative_zero_sum,
    dirichlet_poly_eval,
    moment_sum,
    mollifier_coeffs,
    shifted_zero_sum,
    tau_xi_coeffs,
)
from zetamean.util import kahan_sum, kahan_sum_real
from zetamean.zeros import ZeroList, find_zeros
from zetamean.zeta import zeta_batch, zeta_deriv_batch


def test_dirichlet_poly_trivial_cases():
    d1 = delta_sequence()
    assert dirichlet_poly_eval(d1, 3.7 + 2j) == 1.0
    x = mobius_sequence(5)
    total = sum(mobius(n) for n in range(1, 6))
    assert abs(dirichlet_poly_eval(x, 0.0) - total) <= 1e-14


def test_dirichlet_poly_critical_line_conjugation():
    # on the critical line 1 - rho = conj(rho), so real coefficients give
    # X(1-rho) = conj(X(rho))
    x = mobius_sequence(6)
    rho = 0.5 + 21.022039638771j
    left = dirichlet_poly_eval(x, 1.0 - rho)
    right = np.conj(dirichlet_poly_eval(x, rho))
    assert abs(left - right) <= 1e-14


def test_shifted_sum_requires_validated_covering_list(zeros1000):
    d1 = delta_sequence()
    raw = find_zeros(50.0)
    with pytest.raises(ValueError, match="validated"):
        shifted_zero_sum(0.0, 50.0, d1, d1, raw)
    with pytest.raises(ValueError, match="covers"):
        shifted_zero_sum(0.0, 2000.0, d1, d1, zeros1000)


def test_zero_annihilation_at_zero_shift(zeros1000):
    d1 = delta_sequence()
    total = shifted_zero_sum(0.0, 1000.0, d1, d1, zeros1000)
    assert abs(total) < zeros1000.count * 1e-6


def test_shifted_sum_matches_naive_loop(zeros1000):
    # implementation identity: same terms, same order, same compensation
    alpha, T = 0.008, 600.0
    x = mobius_sequence(3)
    got = shifted_zero_sum(alpha, T, x, x, zeros1000)
    gammas = zeros1000.up_to(T)
    rho = 0.5 + 1j * gammas
    terms = (
        zeta_batch(rho + alpha)
        * dirichlet_poly_eval(x, rho)
        * dirichlet_poly_eval(x, 1.0 - rho)
    )
    assert got == kahan_sum(terms)


def test_derivative_sum_matches_naive_loop(zeros1000):
    T = 400.0
    d1 = delta_sequence()
    got = derivative_zero_sum(1, T, d1, d1, zeros1000)
    gammas = zeros1000.up_to(T)
    rho = 0.5 + 1j * gammas
    terms = zeta_deriv_batch(rho, 1)
    assert got == kahan_sum(terms)


def test_conjugation_symmetry_is_exact(zeros1000):
    # conj(kahan(terms)) == kahan(conj(terms)) bit for bit
    alpha, T = 0.009, 500.0
    x = mobius_sequence(3)
    gammas = zeros1000.up_to(T)
    rho = 0.5 + 1j * gammas
    terms = (
        zeta_batch(rho + alpha)
        * dirichlet_poly_eval(x, rho)
        * dirichlet_poly_eval(x, 1.0 - rho)
    )
    assert np.conj(kahan_sum(terms)) == kahan_sum(np.conj(terms))


def test_zero_window_additivity(zeros1000):
    m, T, T_split = 1, 700.0, 300.0
    d1 = delta_sequence()
    whole = derivative_zero_sum(m, T, d1, d1, zeros1000)
    head = derivative_zero_sum(m, T_split, d1, d1, zeros1000)
    gammas = zeros1000.array()
    window = gammas[(gammas > T_split) & (gammas <= T)]
    rho = 0.5 + 1j * window
    tail = kahan_sum(zeta_deriv_batch(rho, m))
    assert abs(whole - (head + tail)) <= 1e-10 * (1 + abs(whole))


def test_derivative_sum_order_check(zeros1000):
    with pytest.raises(ValueError):
        derivative_zero_sum(0, 100.0, delta_sequence(), delta_sequence(), zeros1000)


def test_moment_sum_matches_naive_loop_and_grows(zeros1000):
    heights = (200.0, 400.0, 600.0)
    previous = -1.0
    for T in heights:
        got = moment_sum(1, 1, T, zeros1000)
        gammas = zeros1000.up_to(T)
        vals = zeta_deriv_batch(0.5 + 1j * gammas, 1)
        assert got == kahan_sum_real(np.abs(vals) ** 2)
        assert got >= 0.0
        assert got > previous
        previous = got


def test_mollifier_coefficients():
    seq = mollifier_coeffs(4, [0.0, 1.0])
    assert seq(1) == 1.0
    assert abs(seq(2) - (-math.log(2) / math.log(4))) <= 1e-15
    assert seq(4) == 0.0  # mu(4) = 0
    assert seq(9) == 0.0  # beyond support
    assert mollifier_coeffs(1, [0.0, 1.0])(1) == 1.0


def test_mollifier_polynomial_constraints():
    with pytest.raises(ValueError, match="P"):
        mollifier_coeffs(4, [0.5, 0.5])  # P(0) != 0
    with pytest.raises(ValueError, match="P"):
        mollifier_coeffs(4, [0.0, 2.0])  # P(1) != 1


def test_tau_xi_coefficients():
    ones = tau_xi_coeffs(1, 3.0)
    assert ones.support_bound == 3
    assert all(ones(n) == 1 for n in (1, 2, 3))
    seq = tau_xi_coeffs(2, 2.0)
    assert seq(4) == truncated_tau(4, 2, 2.0) == 1
    assert seq(2) == truncated_tau(2, 2, 2.0)
    assert seq.support_bound == 4
    for n in range(1, seq.support_bound + 1):
        assert seq(n) == truncated_tau(n, 2, 2.0), n


def test_tau_xi_support_cap():
    with pytest.raises(ValueError, match="cap"):
        tau_xi_coeffs(4, 40.0)


def test_moment_config_invariants():
    cfg = MomentConfig(derivative_order=1, moment_exponent=2, xi=3.0)
    assert cfg.xi**cfg.moment_exponent == 9.0
    with pytest.raises(ValueError):
        MomentConfig(derivative_order=0, moment_exponent=1, xi=2.0)
    with pytest.raises(ValueError):
        MomentConfig(derivative_order=1, moment_exponent=1, xi=0.5)
    with pytest.raises(ValueError):
        MomentConfig(
            derivative_order=1, moment_exponent=1, xi=2.0, mollifier_poly=(0.5, 0.5)
        )


def test_derivative_sum_real_part_dominates(zeros1000):
    # conjugation symmetry of the zero set keeps the imaginary part small
    # against the real part for m = 1, N = 1 at height 1000
    d1 = delta_sequence()
    total = derivative_zero_sum(1, 1000.0, d1, d1, zeros1000)
    assert abs(total.imag) < 0.02 * abs(total.real)


def test_compare_identical_series():
    series = {100.0: 1 + 1j, 200.0: 2 - 1j}
    report = compare(series, dict(series))
    assert all(d == 0.0 for d in report.deviations)
    assert all(r == 1.0 for r in report.ratios)


def test_compare_zero_prediction_guard():
    report = compare({100.0: 1 + 0j}, {100.0: 0j})
    assert math.isfinite(report.deviations[0])
    assert math.isnan(report.ratios[0].real)


def test_compare_grid_mismatch_rejected():
    with pytest.raises(ValueError, match="grids"):
        compare({100.0: 1j}, {200.0: 1j})


def test_report_round_trips_through_csv(tmp_path):
    report = compare(
        {100.0: 1.25 + 0.5j, 250.0: -3.5 + 0.25j},
        {100.0: 1.0 + 0.5j, 250.0: -3.25 + 0.5j},
        configuration={"preset": "unit-test"},
    )
    path = tmp_path / "report.csv"
    report.to_csv(path)
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    parsed = [dict(zip(header, (float(v) for v in line.split(",")))) for line in lines[1:]]
    for row, expected in zip(parsed, report.rows()):
        for key, val in expected.items():
            assert abs(row[key] - val) <= 1e-11 * max(1.0, abs(val)), key


def test_report_json(tmp_path):
    report = compare({100.0: 1j}, {100.0: 1j})
    path = tmp_path / "report.json"
    report.to_json(path)
    import json

    data = json.loads(path.read_text())
    assert data["rows"][0]["deviation"] == 0.0


def test_comparison_report_grid_invariant():
    with pytest.raises(ValueError, match="increasing"):
        ComparisonReport(
            heights=(200.0, 100.0),
            empirical=(1j, 1j),
            predicted=(1j, 1j),
            configuration={},
        )
