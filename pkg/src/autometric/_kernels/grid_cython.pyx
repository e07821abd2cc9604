# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernels: membership evaluation and clipped-max centroid.

Semantics match grid_python exactly (same shape codes, same trapezoid
end-weighting); only the inner loops are compiled.
"""
from libc.math cimport exp, fabs, pow

import numpy as np

NAME = "cython"

cdef int TRAPEZOID = 0
cdef int Z_SPLINE = 1
cdef int S_SPLINE = 2
cdef int GENERALIZED_BELL = 3
cdef int GAUSSIAN = 4


cdef inline double _eval_one(int code, const double* p, double x) noexcept nogil:
    cdef double left, right, mid, t, u, z
    if code == TRAPEZOID:
        if p[0] == p[1]:
            left = 1.0 if x >= p[0] else 0.0
        else:
            left = (x - p[0]) / (p[1] - p[0])
        if p[2] == p[3]:
            right = 1.0 if x <= p[3] else 0.0
        else:
            right = (p[3] - x) / (p[3] - p[2])
        if left > 1.0:
            left = 1.0
        if right < left:
            left = right
        return left if left > 0.0 else 0.0
    if code == Z_SPLINE or code == S_SPLINE:
        if x <= p[0]:
            z = 1.0
        elif x >= p[1]:
            z = 0.0
        else:
            mid = 0.5 * (p[0] + p[1])
            if x <= mid:
                t = (x - p[0]) / (p[1] - p[0])
                z = 1.0 - 2.0 * t * t
            else:
                u = (p[1] - x) / (p[1] - p[0])
                z = 2.0 * u * u
        return z if code == Z_SPLINE else 1.0 - z
    if code == GENERALIZED_BELL:
        return 1.0 / (1.0 + pow(fabs((x - p[2]) / p[0]), 2.0 * p[1]))
    if code == GAUSSIAN:
        t = (x - p[1]) / p[0]
        return exp(-0.5 * t * t)
    return 0.0


def eval_mf_array(int code, params, xs):
    cdef double[4] p
    cdef int i
    cdef tuple ptup = tuple(params)
    for i in range(len(ptup)):
        p[i] = ptup[i]
    out = np.empty(len(xs), dtype=np.float64)
    cdef double[::1] vout = out
    cdef double[::1] vx = np.ascontiguousarray(xs, dtype=np.float64)
    cdef Py_ssize_t k, n = vx.shape[0]
    with nogil:
        for k in range(n):
            vout[k] = _eval_one(code, p, vx[k])
    return out


def clipped_max_centroid(curves, strengths, xs):
    cdef double[:, ::1] cv = np.ascontiguousarray(curves, dtype=np.float64)
    cdef double[::1] st = np.ascontiguousarray(strengths, dtype=np.float64)
    cdef double[::1] vx = np.ascontiguousarray(xs, dtype=np.float64)
    cdef Py_ssize_t r, k
    cdef Py_ssize_t nrules = cv.shape[0], n = vx.shape[0]
    cdef double m, mi, w, sm = 0.0, sx = 0.0
    with nogil:
        for k in range(n):
            m = 0.0
            for r in range(nrules):
                if st[r] <= 0.0:
                    continue
                mi = cv[r, k]
                if mi > st[r]:
                    mi = st[r]
                if mi > m:
                    m = mi
            w = 0.5 if (k == 0 or k == n - 1) else 1.0
            sm += w * m
            sx += w * m * vx[k]
    if sm <= 0.0:
        return float("nan"), 0.0
    return sx / sm, sm
