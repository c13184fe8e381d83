# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: entropy split search and brute-force k-NN.

Semantics mirror ``pure.py`` exactly, including tie-breaking, so the two
backends are interchangeable.
"""

from libc.math cimport INFINITY, log2
from libc.stdlib cimport free, malloc, qsort

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "fast"

cdef double GAIN_EPS = 1e-12


cdef struct VL:
    double v
    unsigned char y


cdef int _cmp_vl(const void* a, const void* b) noexcept nogil:
    cdef double va = (<const VL*> a).v
    cdef double vb = (<const VL*> b).v
    if va < vb:
        return -1
    if va > vb:
        return 1
    return 0


cdef inline double _entropy_bits(double neg, double pos) noexcept nogil:
    cdef double total = neg + pos
    cdef double h = 0.0
    cdef double p
    if total <= 0.0:
        return 0.0
    if neg > 0.0:
        p = neg / total
        h -= p * log2(p)
    if pos > 0.0:
        p = pos / total
        h -= p * log2(p)
    return h


def best_split(
    cnp.ndarray[cnp.float64_t, ndim=2] X,
    cnp.ndarray[cnp.uint8_t, ndim=1] y,
    cnp.ndarray[cnp.int64_t, ndim=1] rows,
    cnp.ndarray[cnp.int64_t, ndim=1] features,
    int min_leaf,
):
    """See ``pure.best_split``. Returns (feature, threshold, gain)."""
    cdef Py_ssize_t n = rows.shape[0]
    cdef Py_ssize_t nf = features.shape[0]
    cdef double[:, ::1] Xv = np.ascontiguousarray(X)
    cdef unsigned char[::1] yv = y
    cdef long long[::1] rv = rows
    cdef long long[::1] fv = features

    cdef double total_pos = 0.0
    cdef Py_ssize_t i, j
    for i in range(n):
        total_pos += yv[rv[i]]
    cdef double total_neg = n - total_pos

    cdef long long best_feature = -1
    cdef double best_threshold = 0.0
    cdef double best_gain = 0.0
    if n < 2 * min_leaf or total_pos == 0.0 or total_pos == <double> n:
        return -1, 0.0, 0.0

    cdef double parent = _entropy_bits(total_neg, total_pos)
    cdef VL* buf = <VL*> malloc(n * sizeof(VL))
    if buf == NULL:
        raise MemoryError()

    cdef long long f
    cdef double cum_pos, left_n, right_n, left_pos, right_pos, child, gain
    try:
        with nogil:
            for j in range(nf):
                f = fv[j]
                for i in range(n):
                    buf[i].v = Xv[rv[i], f]
                    buf[i].y = yv[rv[i]]
                qsort(buf, n, sizeof(VL), _cmp_vl)

                cum_pos = 0.0
                for i in range(n - 1):
                    cum_pos += buf[i].y
                    if buf[i + 1].v <= buf[i].v:
                        continue
                    left_n = i + 1
                    right_n = n - left_n
                    if left_n < min_leaf or right_n < min_leaf:
                        continue
                    left_pos = cum_pos
                    right_pos = total_pos - left_pos
                    child = (left_n / n) * _entropy_bits(left_n - left_pos, left_pos) \
                        + (right_n / n) * _entropy_bits(right_n - right_pos, right_pos)
                    gain = parent - child
                    if gain > best_gain and gain > GAIN_EPS:
                        best_gain = gain
                        best_feature = f
                        best_threshold = (buf[i].v + buf[i + 1].v) / 2.0
    finally:
        free(buf)
    return int(best_feature), float(best_threshold), float(best_gain)


def knn_indices(
    cnp.ndarray[cnp.float64_t, ndim=2] X,
    cnp.ndarray[cnp.float64_t, ndim=2] Q,
    int k,
    exclude=None,
):
    """See ``pure.knn_indices``."""
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t nq = Q.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef long long n_excluded = 0 if exclude is None else 1
    if k < 1 or k > n - n_excluded:
        raise ValueError(f"k={k} out of range for {n} reference rows")

    cdef double[:, ::1] Xv = np.ascontiguousarray(X)
    cdef double[:, ::1] Qv = np.ascontiguousarray(Q)
    cdef long long[::1] ev
    if exclude is None:
        ev = np.full(nq, -1, dtype=np.int64)
    else:
        ev = np.ascontiguousarray(exclude, dtype=np.int64)

    out_arr = np.empty((nq, k), dtype=np.int64)
    cdef long long[:, ::1] out = out_arr
    dist_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] dist = dist_arr

    cdef Py_ssize_t i, j, t, m, arg
    cdef double s, diff, best
    with nogil:
        for i in range(nq):
            for j in range(n):
                s = 0.0
                for t in range(d):
                    diff = Xv[j, t] - Qv[i, t]
                    s += diff * diff
                dist[j] = s
            if ev[i] >= 0:
                dist[ev[i]] = INFINITY
            # partial selection sort: k smallest, ties toward lower index
            for m in range(k):
                arg = -1
                best = INFINITY
                for j in range(n):
                    if dist[j] < best:
                        best = dist[j]
                        arg = j
                out[i, m] = arg
                dist[arg] = INFINITY
    return out_arr
