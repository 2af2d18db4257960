# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Gaussian-KDE kernels.

These are the inner loops of the Monte Carlo studies (one n x n kernel sum
per replicate).  The numpy fallback in ``_fallback.py`` implements the same
contracts; ``benchmarks/bench_kernels.py`` compares the two.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, pow, sqrt

cnp.import_array()

cdef double _INV_SQRT_2PI = 1.0 / sqrt(2.0 * 3.14159265358979323846)


def gauss_kde_eval(query, centers, double h):
    """Evaluate the Gaussian-kernel density estimate at the query points."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] q = np.ascontiguousarray(
        query, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c = np.ascontiguousarray(
        centers, dtype=np.float64).ravel()
    cdef Py_ssize_t nq = q.shape[0]
    cdef Py_ssize_t nc = c.shape[0]
    if nc == 0:
        raise ValueError("need at least one kernel center")
    if h <= 0.0:
        raise ValueError("bandwidth must be positive")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(nq, dtype=np.float64)
    cdef double scale = _INV_SQRT_2PI / (h * nc)
    cdef double inv_h = 1.0 / h
    cdef double acc, z
    cdef Py_ssize_t i, j
    for i in range(nq):
        acc = 0.0
        for j in range(nc):
            z = (q[i] - c[j]) * inv_h
            acc += exp(-0.5 * z * z)
        out[i] = acc * scale
    return out


def gauss_kde_self_weights(centers, double h, double beta):
    """Power weights ghat(c_j)**(beta - 1); exact ones at beta == 1."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c = np.ascontiguousarray(
        centers, dtype=np.float64).ravel()
    cdef Py_ssize_t n = c.shape[0]
    if beta == 1.0:
        return np.ones(n)
    if h <= 0.0:
        raise ValueError("bandwidth must be positive")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double scale = _INV_SQRT_2PI / (h * n)
    cdef double inv_h = 1.0 / h
    cdef double expo = beta - 1.0
    cdef double acc, z
    cdef Py_ssize_t i, j
    for i in range(n):
        acc = 0.0
        for j in range(n):
            z = (c[i] - c[j]) * inv_h
            acc += exp(-0.5 * z * z)
        out[i] = pow(acc * scale, expo)
    return out
