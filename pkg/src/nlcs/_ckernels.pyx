# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, fabs, INFINITY

cnp.import_array()


def laguerre_sequence(Py_ssize_t n_max, double m, double x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n_max + 1, dtype=np.float64)
    cdef double prev = 1.0, cur, nxt
    cdef Py_ssize_t n
    out[0] = prev
    if n_max == 0:
        return out
    cur = 1.0 + m - x
    out[1] = cur
    for n in range(1, n_max):
        nxt = ((2 * n + 1 + m - x) * cur - (n + m) * prev) / (n + 1)
        out[n + 1] = nxt
        prev = cur
        cur = nxt
    return out


def signed_log_cumprod(values):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0], k
    cdef cnp.ndarray[cnp.int8_t, ndim=1] signs = np.empty(n + 1, dtype=np.int8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] logs = np.empty(n + 1, dtype=np.float64)
    cdef int sign = 1
    cdef double acc = 0.0, x
    signs[0] = 1
    logs[0] = 0.0
    for k in range(n):
        x = v[k]
        if sign != 0:
            if x == 0.0:
                sign = 0
                acc = -INFINITY
            else:
                if x < 0.0:
                    sign = -sign
                acc += log(fabs(x))
        signs[k + 1] = sign
        logs[k + 1] = acc
    return signs, logs
