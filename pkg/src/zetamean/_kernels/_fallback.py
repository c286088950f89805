"""Numpy reference implementation of the Dirichlet partial-sum kernel.

``dirichlet_partial_sum(s, n_terms)`` returns, for every point ``i``,

    sum_{n=1}^{n_terms[i] - 1}  n^{-s[i]}

which is the truncated main sum of the Euler-Maclaurin evaluation of
zeta(s).  The tail and Bernoulli corrections are applied by the caller,
so the two kernel backends stay byte-compatible in scope.
"""

import numpy as np

BACKEND = "numpy"

# Cap on elements per broadcast block so a batch of high points cannot
# allocate gigabyte-scale scratch arrays.
_BLOCK_ELEMENTS = 4_000_000


def dirichlet_partial_sum(s, n_terms):
    """Truncated sums sum_{n < n_terms[i]} n^{-s[i]} for each point.

    The per-point value depends only on (s[i], n_terms[i]); grouping by
    the truncation value is a vectorization detail and cannot change
    results.
    """
    s = np.ascontiguousarray(s, dtype=np.complex128)
    n_terms = np.ascontiguousarray(n_terms, dtype=np.int64)
    if s.shape != n_terms.shape or s.ndim != 1:
        raise ValueError("s and n_terms must be 1-d arrays of equal length")
    out = np.empty(s.shape, dtype=np.complex128)
    if s.size == 0:
        return out
    if int(n_terms.min()) < 1:
        raise ValueError("n_terms must be >= 1")
    logs = np.log(np.arange(1, int(n_terms.max()), dtype=np.float64))
    for n in np.unique(n_terms):
        idx = np.nonzero(n_terms == n)[0]
        width = int(n) - 1
        if width == 0:
            out[idx] = 0.0
            continue
        rows = max(1, _BLOCK_ELEMENTS // width)
        for lo in range(0, idx.size, rows):
            sel = idx[lo : lo + rows]
            block = np.exp(np.multiply.outer(-s[sel], logs[:width]))
            out[sel] = block.sum(axis=1)
    return out
