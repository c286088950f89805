"""Discrete mean values of the Riemann zeta function over its nontrivial
zeros: explicit main-term predictions for

    sum_{0 < gamma <= T} zeta(rho + alpha) X(rho) Y(1 - rho)
    sum_{0 < gamma <= T} zeta^{(m)}(rho)   X(rho) Y(1 - rho)

with X, Y Dirichlet polynomials, plus the desk-scale machinery to verify
them empirically: a double-precision zeta engine, a critical-line zero
finder, zero-sum accumulators, and a batch CLI.
"""

from .arith import (
    CoefficientSequence,
    delta_sequence,
    dirichlet_convolve,
    euler_phi,
    log_power_sequence,
    mobius,
    mobius_sequence,
    omega,
    power_sequence,
    tau_k,
    truncated_tau,
    von_mangoldt,
)
from .constants import (
    ExpansionTable,
    default_table,
    eta,
    polylog_neg,
    stieltjes_gamma,
    stirling2,
    tilde_gamma,
)
from .empirical import (
    ComparisonReport,
    MomentConfig,
    compare,
    derivative_zero_sum,
    dirichlet_poly_eval,
    mollifier_coeffs,
    moment_sum,
    shifted_zero_sum,
    tau_xi_coeffs,
)
from .mainterm import (
    MainTermReport,
    PoleError,
    ShiftParameters,
    composite_kernel_term,
    derivative_mean_main_term,
    euler_factor,
    height_polynomial,
    log_composition_sum,
    offset_polynomial,
    pair_kernel,
    pair_kernel_by_shift_derivative,
    pair_kernel_derivative,
    prime_power_kernel_term,
    shift_bound,
    shifted_mean_main_term,
    shifted_zeta_ratio,
)
from .zeros import (
    ZeroList,
    export_zeros,
    find_zeros,
    import_zeros,
    validate_zero_list,
)
from .zeta import (
    DEFAULT_OPTIONS,
    EngineError,
    EvaluationOptions,
    chi_factor,
    hardy_z,
    riemann_siegel_theta,
    zeta,
    zeta_deriv,
)

__version__ = "0.1.0"
