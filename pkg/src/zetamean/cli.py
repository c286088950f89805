"""Batch front-end: config ingestion, command dispatch, report emission.

Commands: constants, mainterm, zeros, empirical, compare, moments.
Runs are configured by a flat ``key = value`` text file (see docs/config.md)
and/or command-line flags; flags win over file values.  Unknown config keys
are fatal.  All outputs are deterministic for a fixed configuration,
whatever ZETAMEAN_THREADS says.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Dict, Optional, Tuple

from .arith import CoefficientSequence, delta_sequence, mobius_sequence
from .constants import default_table
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
from .mainterm import derivative_mean_main_term, shifted_mean_main_term
from .util import format_sig, resolve_threads
from .zeros import ZeroList, export_zeros, find_zeros, import_zeros, validate_zero_list

__all__ = ["RunConfig", "load_config", "run", "main"]

COMMANDS = ("constants", "mainterm", "zeros", "empirical", "compare", "moments")
GENERATORS = ("delta", "truncated_mobius", "mollifier", "tau_xi", "explicit-list")
PRESETS = ("fujii", "corollary-m", "mollifier", "moments")
MAX_GRID_HEIGHT = 1.0e4


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass
class RunConfig:
    """Validated description of one batch run."""

    command: str
    grid: Tuple[float, ...] = ()
    preset: Optional[str] = None
    alpha: complex = 0j
    m: int = 1
    moment_k: int = 1
    xi: float = 2.0
    coeffs: str = "delta"
    coeff_n: int = 1
    mollifier_poly: Optional[Tuple[float, ...]] = None
    coeff_values: Optional[Dict[int, complex]] = None
    zero_source: str = "compute"
    scan_step: float = 0.05
    tmax: Optional[float] = None
    height: Optional[float] = None
    max_order: int = 12
    output: Optional[str] = None
    format: str = "csv"
    threads: Optional[int] = None
    zeros_subcommand: str = "find"
    input: Optional[str] = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; expected one of {COMMANDS}")
        if self.coeffs not in GENERATORS:
            raise ConfigError(
                f"unknown coefficient generator {self.coeffs!r}; expected one of {GENERATORS}"
            )
        if self.preset is not None and self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}; expected one of {PRESETS}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}; expected csv or json")
        if self.grid:
            if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
                bad = next((a, b) for a, b in zip(self.grid, self.grid[1:]) if b <= a)
                raise ConfigError(f"grid must be strictly increasing; offending pair {bad}")
            if self.grid[-1] > MAX_GRID_HEIGHT:
                raise ConfigError(f"grid heights are capped at {MAX_GRID_HEIGHT:g}")
            if self.grid[0] <= 0:
                raise ConfigError("grid heights must be positive")
        if self.coeffs == "mollifier" and self.mollifier_poly is None:
            raise ConfigError("generator 'mollifier' requires mollifier_poly")
        if self.coeffs == "explicit-list" and not self.coeff_values:
            raise ConfigError("generator 'explicit-list' requires coeff_values")


# --- config file parsing -------------------------------------------------------

_FIELD_NAMES = {f.name for f in fields(RunConfig)}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key == "grid":
        return tuple(float(tok) for tok in raw.split(",") if tok.strip())
    if key == "mollifier_poly":
        return tuple(float(tok) for tok in raw.split(",") if tok.strip())
    if key == "coeff_values":
        out: Dict[int, complex] = {}
        for tok in raw.split(","):
            tok = tok.strip()
            if not tok:
                continue
            n_str, _, v_str = tok.partition(":")
            out[int(n_str)] = complex(v_str)
        return out
    if key == "alpha":
        return complex(raw)
    if key in ("m", "moment_k", "coeff_n", "max_order", "threads"):
        return int(raw)
    if key in ("xi", "scan_step", "tmax", "height"):
        return float(raw)
    return raw


def load_config(path) -> RunConfig:
    """Parse and validate a ``key = value`` run-configuration file.

    Unknown keys are fatal (strict mode); parse errors carry path and line.
    """
    values: Dict[str, object] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition("=")
            key = key.strip()
            if not sep:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            if key not in _FIELD_NAMES:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            val = val.split("#", 1)[0]
            try:
                values[key] = _parse_value(key, val)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    if "command" not in values:
        raise ConfigError(f"{path}: missing required key 'command'")
    try:
        return RunConfig(**values)  # type: ignore[arg-type]
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


# --- coefficient construction ---------------------------------------------------


def _build_coeffs(config: RunConfig) -> CoefficientSequence:
    if config.coeffs == "delta":
        return delta_sequence()
    if config.coeffs == "truncated_mobius":
        return mobius_sequence(config.coeff_n)
    if config.coeffs == "mollifier":
        return mollifier_coeffs(config.coeff_n, config.mollifier_poly)
    if config.coeffs == "tau_xi":
        return tau_xi_coeffs(config.moment_k, config.xi)
    return CoefficientSequence(
        max(config.coeff_values), dict(config.coeff_values), label="explicit"
    )


def _zero_list(config: RunConfig, needed_height: float) -> ZeroList:
    if config.zero_source == "compute":
        zl = find_zeros(needed_height, config.scan_step, threads=config.threads)
    else:
        zl = import_zeros(config.zero_source)
        if zl.height_covered < needed_height:
            raise ConfigError(
                f"zero file {config.zero_source} covers {zl.height_covered:g} "
                f"< needed {needed_height:g}"
            )
    return validate_zero_list(zl, threads=config.threads)


# --- command implementations -----------------------------------------------------


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_constants(config: RunConfig) -> int:
    table = default_table(config.max_order)
    lines = ["u,gamma_u,tilde_gamma_u,eta_u"]
    for u in range(table.max_order + 1):
        lines.append(
            ",".join(
                [str(u)]
                + [format_sig(v) for v in (table.gamma(u), table.tilde(u), table.eta_coeff(u))]
            )
        )
    _emit("\n".join(lines) + "\n", config.output)
    return 0


def _cmd_zeros(config: RunConfig) -> int:
    if config.zeros_subcommand == "find":
        if config.tmax is None:
            raise ConfigError("zeros find requires tmax")
        zl = validate_zero_list(
            find_zeros(config.tmax, config.scan_step, threads=config.threads),
            threads=config.threads,
        )
        if config.output:
            export_zeros(zl, config.output)
        else:
            sys.stdout.write("\n".join(f"{g:.11e}" for g in zl.ordinates) + "\n")
        return 0
    if config.zeros_subcommand == "check":
        if not config.input:
            raise ConfigError("zeros check requires input")
        zl = validate_zero_list(import_zeros(config.input), threads=config.threads)
        sys.stdout.write(
            f"{zl.count} ordinates up to {zl.height_covered:.6f}, "
            f"residual_max {zl.validation.residual_max:.3e}\n"
        )
        return 0
    raise ConfigError(f"unknown zeros subcommand {config.zeros_subcommand!r}")


def _cmd_mainterm(config: RunConfig) -> int:
    height = config.height or (config.grid[-1] if config.grid else None)
    if height is None:
        raise ConfigError("mainterm requires height (or a grid)")
    x = _build_coeffs(config)
    if config.alpha != 0 or config.m == 0:
        report = shifted_mean_main_term(config.alpha, height, x, x)
    else:
        report = derivative_mean_main_term(config.m, height, x, x)
    _emit(report.to_json() + "\n", config.output)
    return 0


def _resolve_pair(config: RunConfig, T: float, x, zeros) -> Tuple[complex, complex]:
    """One (empirical, predicted) pair at height T for the active preset."""
    if config.preset in (None, "fujii", "corollary-m", "mollifier"):
        emp = derivative_zero_sum(config.m, T, x, x, zeros, threads=config.threads)
        pred = derivative_mean_main_term(config.m, T, x, x).total
        return emp, pred
    if config.preset == "moments":
        moment_cfg = MomentConfig(
            derivative_order=config.m,
            moment_exponent=config.moment_k,
            xi=config.xi,
        )
        k = moment_cfg.moment_exponent
        x_seq = delta_sequence() if k == 1 else tau_xi_coeffs(k - 1, moment_cfg.xi)
        y_seq = tau_xi_coeffs(k, moment_cfg.xi)
        bound = max(x_seq.support_bound, y_seq.support_bound)
        x_seq = CoefficientSequence(bound, dict(x_seq.values), x_seq.label)
        y_seq = CoefficientSequence(bound, dict(y_seq.values), y_seq.label)
        emp = derivative_zero_sum(config.m, T, x_seq, y_seq, zeros, threads=config.threads)
        pred = derivative_mean_main_term(config.m, T, x_seq, y_seq).total
        return emp, pred
    raise ConfigError(f"preset {config.preset!r} not handled")


def _apply_preset(config: RunConfig) -> RunConfig:
    if config.preset == "fujii":
        config.m = 1
        config.coeffs = "delta"
    elif config.preset == "corollary-m":
        config.coeffs = "delta"
    elif config.preset == "mollifier":
        config.coeffs = "mollifier"
        if config.mollifier_poly is None:
            config.mollifier_poly = (0.0, 1.0)
    return config


def _cmd_compare(config: RunConfig) -> int:
    if not config.grid:
        raise ConfigError("compare requires a height grid")
    config = _apply_preset(config)
    x = _build_coeffs(config) if config.preset != "moments" else delta_sequence()
    zeros = _zero_list(config, config.grid[-1])
    empirical, predicted = {}, {}
    for T in config.grid:
        emp, pred = _resolve_pair(config, T, x, zeros)
        empirical[T] = emp
        predicted[T] = pred
    report = compare(
        empirical,
        predicted,
        configuration={
            "preset": str(config.preset),
            "m": str(config.m),
            "coeffs": x.label,
            "zero_source": config.zero_source,
        },
    )
    return _emit_report(report, config)


def _emit_report(report: ComparisonReport, config: RunConfig) -> int:
    if config.output is None:
        raise ConfigError("this command requires an output path")
    if config.format == "json":
        report.to_json(config.output)
    else:
        report.to_csv(config.output)
    return 0


def _cmd_empirical(config: RunConfig) -> int:
    if not config.grid:
        raise ConfigError("empirical requires a height grid")
    x = _build_coeffs(config)
    zeros = _zero_list(config, config.grid[-1])
    lines = ["T,sum_re,sum_im"]
    for T in config.grid:
        if config.alpha != 0:
            value = shifted_zero_sum(config.alpha, T, x, x, zeros, threads=config.threads)
        else:
            value = derivative_zero_sum(config.m, T, x, x, zeros, threads=config.threads)
        lines.append(",".join([format_sig(T), format_sig(value.real), format_sig(value.imag)]))
    _emit("\n".join(lines) + "\n", config.output)
    return 0


def _cmd_moments(config: RunConfig) -> int:
    """Table of sum |zeta^(m)(rho)|^{2k} against its leading growth order:
    the classical (T/24pi) log^4 T for (m, k) = (1, 1), the bare
    T log^{k^2+2km+1} T otherwise (constant unknown, diagnostic only)."""
    if not config.grid:
        raise ConfigError("moments requires a height grid")
    zeros = _zero_list(config, config.grid[-1])
    lines = ["T,moment,leading_order,ratio"]
    for T in config.grid:
        value = moment_sum(config.m, config.moment_k, T, zeros, threads=config.threads)
        k, m = config.moment_k, config.m
        if (m, k) == (1, 1):
            leading = T / (24 * math.pi) * math.log(T) ** 4
        else:
            leading = T * math.log(T) ** (k * k + 2 * k * m + 1)
        lines.append(",".join(format_sig(v) for v in (T, value, leading, value / leading)))
    _emit("\n".join(lines) + "\n", config.output)
    return 0


_DISPATCH = {
    "constants": _cmd_constants,
    "zeros": _cmd_zeros,
    "mainterm": _cmd_mainterm,
    "compare": _cmd_compare,
    "empirical": _cmd_empirical,
    "moments": _cmd_moments,
}


def run(config: RunConfig) -> int:
    """Execute a validated configuration; returns the process exit status."""
    resolve_threads(config.threads)  # fail fast on a bad thread setting
    return _DISPATCH[config.command](config)


# --- argparse front-end -----------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--output", help="output path (stdout for table commands if omitted)")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--threads", type=int)
    parser.add_argument("--grid", help="comma-separated strictly increasing heights")
    parser.add_argument("--alpha", help="complex shift, e.g. 0.02+0.01j")
    parser.add_argument("--m", type=int, help="derivative order")
    parser.add_argument("--moment-k", dest="moment_k", type=int)
    parser.add_argument("--xi", type=float)
    parser.add_argument("--coeffs", choices=GENERATORS)
    parser.add_argument("--coeff-n", dest="coeff_n", type=int)
    parser.add_argument("--mollifier-poly", dest="mollifier_poly")
    parser.add_argument("--coeff-values", dest="coeff_values")
    parser.add_argument("--zeros", dest="zero_source", help="'compute' or a zero file path")
    parser.add_argument("--scan-step", dest="scan_step", type=float)
    parser.add_argument("--height", type=float)
    parser.add_argument("--max-order", dest="max_order", type=int)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetamean",
        description="Discrete mean values of zeta over its zeros: predictions and verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("constants", "mainterm", "empirical", "compare", "moments"):
        p = sub.add_parser(name)
        _add_common(p)
        if name == "compare":
            p.add_argument("--preset", choices=PRESETS)
    zp = sub.add_parser("zeros")
    zsub = zp.add_subparsers(dest="zeros_subcommand", required=True)
    for sub_name in ("find", "check"):
        zpp = zsub.add_parser(sub_name)
        _add_common(zpp)
        zpp.add_argument("--tmax", type=float)
        zpp.add_argument("--input")
    return parser


def _merge_flags(args: argparse.Namespace) -> RunConfig:
    raw: Dict[str, object] = {}
    if args.config:
        file_config = load_config(args.config)
        raw = {
            f.name: getattr(file_config, f.name)
            for f in fields(RunConfig)
            if getattr(file_config, f.name) != f.default
        }
    raw["command"] = args.command
    for key, value in vars(args).items():
        if key in ("config", "command") or value is None:
            continue
        if key in ("grid", "mollifier_poly", "coeff_values", "alpha"):
            value = _parse_value(key, str(value))
        raw[key] = value
    return RunConfig(**raw)  # type: ignore[arg-type]


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _merge_flags(args)
        return run(config)
    except (ConfigError, ValueError) as exc:
        print(f"zetamean: error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"zetamean: numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
