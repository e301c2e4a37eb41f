# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled exceedance-counting kernels.

Mirrors taildep._kernels_py exactly, including the ulp walk that pins every
threshold to the boundary of {m : floor(m * x_j) >= n - rank + 1}.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, nextafter

cnp.import_array()


def exceedance_thresholds(ranks, x):
    """Smallest level at which each row exceeds in some coordinate."""
    cdef const cnp.int64_t[:, ::1] r = np.ascontiguousarray(ranks, dtype=np.int64)
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = r.shape[0]
    cdef Py_ssize_t d = r.shape[1]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double best, t, down, c, xj
    for i in range(n):
        best = INFINITY
        for j in range(d):
            xj = xv[j]
            if xj > 0.0:
                c = <double> (n - r[i, j] + 1)
                t = c / xj
                while t * xj < c:
                    t = nextafter(t, INFINITY)
                down = nextafter(t, -INFINITY)
                while down * xj >= c:
                    t = down
                    down = nextafter(t, -INFINITY)
                if t < best:
                    best = t
        out[i] = best
    return out_arr


def counts_at_levels(tsorted, levels):
    """Number of thresholds <= m for each level m (tsorted ascending)."""
    cdef const double[::1] t = np.ascontiguousarray(tsorted, dtype=np.float64)
    cdef const double[::1] lv = np.ascontiguousarray(levels, dtype=np.float64)
    cdef Py_ssize_t n = t.shape[0]
    cdef Py_ssize_t nl = lv.shape[0]
    out_arr = np.empty(nl, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef Py_ssize_t q, lo, hi, mid
    cdef double m
    for q in range(nl):
        m = lv[q]
        lo = 0
        hi = n
        while lo < hi:
            mid = (lo + hi) >> 1
            if t[mid] <= m:
                lo = mid + 1
            else:
                hi = mid
        out[q] = lo
    return out_arr
