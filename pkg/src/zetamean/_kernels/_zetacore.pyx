# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dirichlet partial-sum kernel.

Same contract as ``_fallback.dirichlet_partial_sum``: per point i the
truncated main sum  sum_{n=1}^{n_terms[i]-1} n^{-s[i]}  of the
Euler-Maclaurin zeta evaluation.  The inner loop is plain C exp/cos/sin
on doubles and releases the GIL, so batches can be driven from a thread
pool.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, log, sin
from libc.stdlib cimport free, malloc

cnp.import_array()

BACKEND = "cython"


def dirichlet_partial_sum(s, n_terms):
    """Truncated sums sum_{n < n_terms[i]} n^{-s[i]} for each point."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] sv = np.ascontiguousarray(
        s, dtype=np.complex128
    )
    cdef cnp.ndarray[cnp.int64_t, ndim=1] nv = np.ascontiguousarray(
        n_terms, dtype=np.int64
    )
    if sv.shape[0] != nv.shape[0]:
        raise ValueError("s and n_terms must be 1-d arrays of equal length")
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(
        sv.shape[0], dtype=np.complex128
    )
    cdef Py_ssize_t npts = sv.shape[0]
    if npts == 0:
        return out

    cdef Py_ssize_t i
    cdef long nmax = 1
    for i in range(npts):
        if nv[i] < 1:
            raise ValueError("n_terms must be >= 1")
        if nv[i] > nmax:
            nmax = nv[i]

    cdef double *logs = <double *> malloc(nmax * sizeof(double))
    if logs is NULL:
        raise MemoryError()

    cdef long n
    cdef double sr, si, ln, amp, ph, acc_re, acc_im
    with nogil:
        logs[0] = 0.0
        for n in range(1, nmax):
            logs[n] = log(<double> (n + 1))
        for i in range(npts):
            sr = sv[i].real
            si = sv[i].imag
            acc_re = 0.0
            acc_im = 0.0
            # n = 1 contributes exactly 1
            if nv[i] > 1:
                acc_re = 1.0
            for n in range(1, nv[i] - 1):
                ln = logs[n]
                amp = exp(-sr * ln)
                ph = -si * ln
                acc_re += amp * cos(ph)
                acc_im += amp * sin(ph)
            out[i].real = acc_re
            out[i].imag = acc_im
    free(logs)
    return out
