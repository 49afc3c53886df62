# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled imaginary-axis wall kernel (see ``_kernels_py`` for the reference)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, fabs, sqrt, ceil, expm1, tanh, INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef double LOG2 = 0.6931471805599453


cdef inline double _sgn(double v) noexcept nogil:
    if v > 0:
        return 1.0
    if v < 0:
        return -1.0
    return 0.0


cdef inline double _lg(double v) noexcept nogil:
    if v == 0:
        return -INFINITY
    return log(fabs(v))


cdef void _point(double t, double n, double chi, int L, bint pec,
                 double* r, double* rm, double* p,
                 double* lx, double* sx, double* ly, double* sy) noexcept nogil:
    cdef int l, k, nst
    cdef double la, li, rr, pp, c, ni, na, par, thr, inv_p
    # a ratios and log a_l
    la = -t - log(t)
    rr = t / (1.0 + t)
    for l in range(1, L + 1):
        if l > 1:
            rr = 1.0 / ((2 * l - 1) / t + rr)
        r[l] = rr
    if not pec:
        rr = (t * n) / (1.0 + t * n)
        for l in range(1, L + 1):
            if l > 1:
                rr = 1.0 / ((2 * l - 1) / (t * n) + rr)
            rm[l] = rr
    # i_l ratios
    thr = 0.25 * L * L
    if thr < 30.0:
        thr = 30.0
    if t > thr:
        pp = 1.0 / tanh(t) - 1.0 / t
        p[1] = pp
        for l in range(2, L + 1):
            pp = 1.0 / pp - (2 * l - 1) / t
            p[l] = pp
    else:
        nst = <int>ceil(sqrt(<double>L * L + 40.0 * t)) + 20
        pp = 0.0
        for k in range(nst, 0, -1):
            pp = 1.0 / ((2 * k + 1) / t + pp)
            if k <= L:
                p[k] = pp
    li = t + log(-expm1(-2.0 * t)) - log(2.0 * t)
    par = 1.0
    for l in range(1, L + 1):
        la -= log(r[l])
        li += log(p[l])
        par = -par
        inv_p = 1.0 / p[l]
        # TE
        if pec:
            ni = 1.0
            na = 1.0
        else:
            c = -n * rm[l]
            ni = inv_p - c
            na = -r[l] - c
        k = 2 * (l - 1)
        lx[k] = LOG2 + li + _lg(ni)
        sx[k] = _sgn(ni)
        ly[k] = la + _lg(na)
        sy[k] = par * _sgn(na)
        # TM
        if pec:
            c = l / t
        else:
            c = (l / t) * (chi / (1.0 + chi)) - rm[l] / n
        ni = inv_p - c
        na = -r[l] - c
        lx[k + 1] = LOG2 + li + _lg(ni)
        sx[k + 1] = _sgn(ni)
        ly[k + 1] = la + _lg(na)
        sy[k + 1] = par * _sgn(na)


def wall_terms(t, n, chi, int lmax, bint pec):
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef Py_ssize_t npt = tv.shape[0]
    cdef double[::1] nv
    cdef double[::1] cv
    if pec:
        nv = np.ones(npt)
        cv = np.zeros(npt)
    else:
        nv = np.ascontiguousarray(n, dtype=np.float64)
        cv = np.ascontiguousarray(chi, dtype=np.float64)
    if lmax < 1:
        raise ValueError("lmax must be >= 1")
    for i in range(npt):
        if not tv[i] > 0:
            raise ValueError("t must be positive")
    lx_a = np.empty((npt, lmax, 2))
    sx_a = np.empty((npt, lmax, 2))
    ly_a = np.empty((npt, lmax, 2))
    sy_a = np.empty((npt, lmax, 2))
    cdef double[:, :, ::1] lx = lx_a
    cdef double[:, :, ::1] sx = sx_a
    cdef double[:, :, ::1] ly = ly_a
    cdef double[:, :, ::1] sy = sy_a
    cdef double* buf = <double*> malloc(3 * (lmax + 2) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t j
    try:
        with nogil:
            for j in range(npt):
                _point(tv[j], nv[j], cv[j], lmax, pec,
                       buf, buf + (lmax + 2), buf + 2 * (lmax + 2),
                       &lx[j, 0, 0], &sx[j, 0, 0], &ly[j, 0, 0], &sy[j, 0, 0])
    finally:
        free(buf)
    return lx_a, sx_a, ly_a, sy_a
