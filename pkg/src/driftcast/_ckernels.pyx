# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled distance / assignment kernels.

Summation runs component by component in index order so results are
bit-identical to the numpy fallback in ``_pykernels``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()

# metric codes: 0 = manhattan, 1 = euclidean


cdef inline double _dist(const double[:, ::1] X, Py_ssize_t i,
                         const double[:, ::1] C, Py_ssize_t k,
                         Py_ssize_t d, int metric) noexcept nogil:
    cdef double s = 0.0, diff
    cdef Py_ssize_t j
    if metric == 0:
        for j in range(d):
            s = s + fabs(X[i, j] - C[k, j])
        return s
    for j in range(d):
        diff = X[i, j] - C[k, j]
        s = s + diff * diff
    return sqrt(s)


def pairwise(const double[:, ::1] X, const double[:, ::1] C, int metric):
    cdef Py_ssize_t n = X.shape[0], K = C.shape[0], d = X.shape[1]
    out = np.empty((n, K), dtype=np.float64)
    cdef double[:, ::1] D = out
    cdef Py_ssize_t i, k
    with nogil:
        for i in range(n):
            for k in range(K):
                D[i, k] = _dist(X, i, C, k, d, metric)
    return out


def assign(const double[:, ::1] X, const double[:, ::1] C, int metric):
    cdef Py_ssize_t n = X.shape[0], K = C.shape[0], d = X.shape[1]
    labels_arr = np.empty(n, dtype=np.intp)
    mind_arr = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t[::1] labels = labels_arr
    cdef double[::1] mind = mind_arr
    cdef Py_ssize_t i, k, best
    cdef double dk, bd
    with nogil:
        for i in range(n):
            best = 0
            bd = _dist(X, i, C, 0, d, metric)
            for k in range(1, K):
                dk = _dist(X, i, C, k, d, metric)
                if dk < bd:
                    bd = dk
                    best = k
            labels[i] = best
            mind[i] = bd
    return labels_arr, mind_arr


def sq_residuals(const double[:, ::1] X, const double[:, ::1] C, const Py_ssize_t[::1] labels):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] r = out
    cdef Py_ssize_t i, j, k
    cdef double s, diff
    with nogil:
        for i in range(n):
            k = labels[i]
            s = 0.0
            for j in range(d):
                diff = X[i, j] - C[k, j]
                s = s + diff * diff
            r[i] = s
    return out


def cluster_sums(const double[:, ::1] X, const Py_ssize_t[::1] labels, Py_ssize_t K):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    sums_arr = np.zeros((K, d), dtype=np.float64)
    counts_arr = np.zeros(K, dtype=np.intp)
    cdef double[:, ::1] sums = sums_arr
    cdef Py_ssize_t[::1] counts = counts_arr
    cdef Py_ssize_t i, j, k
    with nogil:
        for i in range(n):
            k = labels[i]
            counts[k] += 1
            for j in range(d):
                sums[k, j] = sums[k, j] + X[i, j]
    return sums_arr, counts_arr
