"""Backend-agreement and contract tests for the Dirichlet-sum kernel."""

import numpy as np
import pytest

from zetamean._kernels import BACKEND, _fallback

try:
    from zetamean._kernels import _zetacore
except ImportError:  # pragma: no cover - build without the extension
    _zetacore = None


def _random_batch(seed, size=257):
    rng = np.random.default_rng(seed)
    s = rng.uniform(-1.0, 2.5, size) + 1j * rng.uniform(-50.0, 5000.0, size)
    n = rng.integers(1, 2048, size)
    return s.astype(np.complex128), n.astype(np.int64)


def test_fallback_matches_direct_sum():
    s, n = _random_batch(1, size=40)
    got = _fallback.dirichlet_partial_sum(s, n)
    for i in range(s.size):
        direct = sum(k ** (-s[i]) for k in range(1, int(n[i])))
        assert abs(got[i] - direct) <= 1e-12 * (1.0 + abs(direct))


@pytest.mark.skipif(_zetacore is None, reason="compiled kernel not built")
def test_compiled_matches_fallback():
    s, n = _random_batch(2)
    a = _zetacore.dirichlet_partial_sum(s, n)
    b = _fallback.dirichlet_partial_sum(s, n)
    scale = 1.0 + np.abs(b)
    assert np.max(np.abs(a - b) / scale) <= 1e-12


def test_selected_backend_exposed():
    assert BACKEND in ("cython", "numpy")


def test_n_terms_one_gives_empty_sum():
    s = np.array([2.0 + 3j])
    n = np.array([1], dtype=np.int64)
    assert _fallback.dirichlet_partial_sum(s, n)[0] == 0j
    if _zetacore is not None:
        assert _zetacore.dirichlet_partial_sum(s, n)[0] == 0j


def test_bad_truncation_rejected():
    s = np.array([2.0 + 0j])
    with pytest.raises(ValueError):
        _fallback.dirichlet_partial_sum(s, np.array([0], dtype=np.int64))
    if _zetacore is not None:
        with pytest.raises(ValueError):
            _zetacore.dirichlet_partial_sum(s, np.array([0], dtype=np.int64))
