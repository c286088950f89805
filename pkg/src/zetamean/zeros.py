"""Critical-line zero ordinates: computation, import/export, validation.

Zeros are located as sign changes of the Hardy Z function on a fixed scan
grid and refined by bisection.  Ordinates are stored alone (the real part
is pinned to 1/2): Z sign changes can only detect critical-line zeros, and
the count check against the zero-counting approximation theta(T)/pi + 1
guards against misses.  All steps are deterministic: the grid depends only
on (t_max, scan_step), bisection runs a fixed iteration count, and merges
happen in window order, so worker count never changes the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from .util import chunked_eval
from .zeta import (
    DEFAULT_OPTIONS,
    EvaluationOptions,
    hardy_z_batch,
    riemann_siegel_theta,
    zeta_batch,
)

__all__ = [
    "ZeroList",
    "ValidationRecord",
    "find_zeros",
    "import_zeros",
    "export_zeros",
    "validate_zero_list",
    "expected_count",
]

# Zeros are refined until the bracket is narrower than this.
BISECTION_TOL = 1e-9
# Scan floor: the first ordinate exceeds 14, so starting the grid at 10
# loses nothing and stays where the Z phase is most accurate.
_SCAN_FLOOR = 10.0
_DEDUP_TOL = 1e-9
_RESIDUAL_LIMIT = 1e-6


@dataclass(frozen=True)
class ValidationRecord:
    residual_max: float
    count_check: bool


@dataclass(frozen=True)
class ZeroList:
    """Ordered ordinates of critical-line zeros up to a height.

    ``ordinates`` is strictly increasing with every entry <= height_covered;
    ``source`` records provenance ("computed" or "imported"); ``validation``
    stays None until validate_zero_list has run.
    """

    ordinates: Tuple[float, ...]
    height_covered: float
    source: str
    validation: Optional[ValidationRecord] = None

    def __post_init__(self) -> None:
        arr = np.asarray(self.ordinates, dtype=np.float64)
        if arr.size and (np.any(arr <= 0.0) or np.any(np.diff(arr) <= 0.0)):
            raise ValueError("ordinates must be strictly increasing positive reals")
        if arr.size and arr[-1] > self.height_covered:
            raise ValueError("ordinates exceed height_covered")
        if self.height_covered <= 0:
            raise ValueError("height_covered must be positive")
        if self.source not in ("computed", "imported"):
            raise ValueError("source must be 'computed' or 'imported'")

    @property
    def count(self) -> int:
        return len(self.ordinates)

    @property
    def validated(self) -> bool:
        return self.validation is not None

    def array(self) -> np.ndarray:
        return np.asarray(self.ordinates, dtype=np.float64)

    def up_to(self, height: float) -> np.ndarray:
        arr = self.array()
        return arr[arr <= height]


def expected_count(t: float) -> int:
    """round(theta(t)/pi + 1), the smooth zero-count approximation."""
    if t < 2.0:
        return 0
    return int(round(riemann_siegel_theta(t) / math.pi + 1.0))


def _sign_change_brackets(
    grid: np.ndarray, z: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    prod = z[:-1] * z[1:]
    idx = np.nonzero(prod < 0.0)[0]
    return grid[idx], grid[idx + 1]


def _bisect_batch(
    lo: np.ndarray,
    hi: np.ndarray,
    zlo: np.ndarray,
    opts: EvaluationOptions,
    threads: int | None,
) -> np.ndarray:
    """Lockstep bisection of all brackets to width <= BISECTION_TOL."""
    if lo.size == 0:
        return lo
    width = float(np.max(hi - lo))
    iterations = max(1, math.ceil(math.log2(width / BISECTION_TOL)))
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        zmid = hardy_z_batch(mid, opts, threads=threads)
        left = zlo * zmid <= 0.0
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        zlo = np.where(left, zlo, zmid)
    return 0.5 * (lo + hi)


def _scan_grid(t_max: float, step: float) -> np.ndarray:
    n_pts = int(math.floor((t_max - _SCAN_FLOOR) / step)) + 1
    grid = _SCAN_FLOOR + step * np.arange(n_pts, dtype=np.float64)
    if grid[-1] < t_max:
        grid = np.append(grid, t_max)
    return grid


def find_zeros(
    t_max: float,
    scan_step: float = 0.05,
    opts: EvaluationOptions = DEFAULT_OPTIONS,
    threads: int | None = None,
) -> ZeroList:
    """All critical-line ordinates in (0, t_max], by Z sign-change scanning.

    Sign changes on the scan grid are refined by bisection to 1e-9.  If the
    resulting count misses round(theta(t_max)/pi + 1), the gaps whose
    theta-increment suggests an unresolved pair are rescanned at half step,
    twice.  A remaining discrepancy of one is accepted (the smooth count is
    only exact to +-1); anything larger raises with the worst window.
    """
    if not 10.0 <= t_max <= 1.0e4:
        raise ValueError("t_max must lie in [10, 1e4]")
    if not 0.0 < scan_step <= 0.1:
        raise ValueError("scan_step must lie in (0, 0.1]")

    grid = _scan_grid(t_max, scan_step)
    z = hardy_z_batch(grid, opts, threads=threads)
    lo, hi = _sign_change_brackets(grid, z)
    zlo = z[np.searchsorted(grid, lo)]
    found = _bisect_batch(lo, hi, zlo, opts, threads)

    target = expected_count(t_max)
    step = scan_step
    for _ in range(2):
        if found.size >= target:
            break
        step *= 0.5
        for a, b in _deficient_windows(found, t_max):
            sub = np.append(np.arange(a, b, step), b)
            if sub.size < 2:
                continue
            zs = hardy_z_batch(sub, opts, threads=threads)
            slo, shi = _sign_change_brackets(sub, zs)
            extra = _bisect_batch(slo, shi, zs[np.searchsorted(sub, slo)], opts, threads)
            found = np.sort(np.concatenate([found, extra]))
            found = _dedup(found)

    found = _dedup(np.sort(found))
    if abs(found.size - target) > 1:
        worst = _deficient_windows(found, t_max)
        raise RuntimeError(
            f"unresolved zero-count mismatch: found {found.size}, smooth count "
            f"{target}; suspect windows {worst[:3]}"
        )
    return ZeroList(
        ordinates=tuple(float(g) for g in found),
        height_covered=float(t_max),
        source="computed",
    )


def _dedup(arr: np.ndarray) -> np.ndarray:
    if arr.size < 2:
        return arr
    keep = np.concatenate([[True], np.diff(arr) > _DEDUP_TOL])
    return arr[keep]


def _deficient_windows(found: np.ndarray, t_max: float) -> list:
    """Gaps between consecutive zeros whose theta increment exceeds ~1.5 pi,
    i.e. windows that should contain at least one more sign change."""
    edges = np.concatenate([[_SCAN_FLOOR], found, [t_max]])
    windows = []
    th = riemann_siegel_theta(edges)
    for i in range(len(edges) - 1):
        if (th[i + 1] - th[i]) / math.pi > 1.5:
            windows.append((float(edges[i]), float(edges[i + 1])))
    return windows


def validate_zero_list(
    zl: ZeroList,
    opts: EvaluationOptions = DEFAULT_OPTIONS,
    threads: int | None = None,
) -> ZeroList:
    """Check residuals |zeta(1/2 + i gamma)| and the smooth count, and attach
    the validation record.  Raises if any residual exceeds 1e-6 or the count
    is off by more than one."""
    arr = zl.array()
    if arr.size:
        residuals = np.abs(
            chunked_eval(
                lambda g: zeta_batch(0.5 + 1j * g, opts), arr, threads=threads
            )
        )
        residual_max = float(residuals.max())
        if residual_max > _RESIDUAL_LIMIT:
            bad = float(arr[int(np.argmax(residuals))])
            raise ValueError(
                f"zero residual {residual_max:.3e} exceeds {_RESIDUAL_LIMIT:g} "
                f"at ordinate {bad!r}"
            )
    else:
        residual_max = 0.0
    count_ok = abs(zl.count - expected_count(zl.height_covered)) <= 1
    if not count_ok:
        raise ValueError(
            f"zero count {zl.count} vs smooth count "
            f"{expected_count(zl.height_covered)} up to {zl.height_covered}"
        )
    return ZeroList(
        ordinates=zl.ordinates,
        height_covered=zl.height_covered,
        source=zl.source,
        validation=ValidationRecord(residual_max=residual_max, count_check=True),
    )


def export_zeros(zl: ZeroList, path) -> None:
    """Write one ordinate per line with 12 significant digits.

    No comment lines are emitted, so the line count equals the zero count;
    the importer still tolerates '#' comments from other producers.
    """
    lines = [f"{g:.11e}" for g in zl.ordinates]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def import_zeros(path) -> ZeroList:
    """Parse a zero file: one decimal ordinate per line, '#' comments allowed.

    Ordinates must be strictly increasing; violations name the offending
    line and pair.
    """
    ordinates = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            try:
                value = float(text)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: unparsable ordinate {text!r}") from exc
            if ordinates and value <= ordinates[-1]:
                raise ValueError(
                    f"{path}:{lineno}: ordinates not increasing "
                    f"({ordinates[-1]!r} before {value!r})"
                )
            if value <= 0:
                raise ValueError(f"{path}:{lineno}: ordinates must be positive")
            ordinates.append(value)
    height = ordinates[-1] if ordinates else 1.0
    return ZeroList(
        ordinates=tuple(ordinates), height_covered=height, source="imported"
    )
