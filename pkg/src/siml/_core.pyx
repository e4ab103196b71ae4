# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical core; see ``_fallback`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, fabs, fmod, rint, pow, M_PI

cnp.import_array()

cdef double SINGULAR_TOL = 1e-8


cdef inline double _dh(double x, double m) noexcept nogil:
    cdef double k = rint(0.5 * x)
    cdef double r = x - 2.0 * k
    cdef double den = sin(0.5 * M_PI * r)
    cdef double v = 0.0
    cdef long l
    if fabs(den) < SINGULAR_TOL:
        for l in range(1, <long>m + 1):
            v += cos((l - 0.5) * M_PI * r)
        v = v / m
    else:
        v = sin(M_PI * (m * r)) / (2.0 * m * den)
    if fmod(k, 2.0) != 0.0:
        return -v
    return v


cdef inline double _kern(double a, double b, double m) noexcept nogil:
    return _dh(a + b, m) + _dh(a - b, m)


def dirichlet_half(x, m):
    xa = np.asarray(x, dtype=np.float64)
    ma = np.ascontiguousarray(np.broadcast_to(np.asarray(m, dtype=np.float64), xa.shape)).ravel()
    xf = np.ascontiguousarray(xa).ravel()
    out = np.empty(xf.shape[0])
    cdef const double[::1] xv = xf
    cdef const double[::1] mv = ma
    cdef double[::1] ov = out
    cdef Py_ssize_t i, n = xf.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = _dh(xv[i], mv[i])
    return out.reshape(xa.shape)


def kernel_direct_sum(u, s, m):
    ua, sa, ma = np.broadcast_arrays(
        np.asarray(u, dtype=np.float64),
        np.asarray(s, dtype=np.float64),
        np.asarray(m, dtype=np.float64),
    )
    shape = ua.shape
    cdef const double[::1] uv = np.ascontiguousarray(ua).ravel()
    cdef const double[::1] sv = np.ascontiguousarray(sa).ravel()
    cdef const double[::1] mv = np.ascontiguousarray(ma).ravel()
    out = np.empty(uv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i, n = uv.shape[0]
    cdef long l
    cdef double acc, pu, ps, c
    with nogil:
        for i in range(n):
            acc = 0.0
            pu = M_PI * uv[i]
            ps = M_PI * sv[i]
            for l in range(1, <long>mv[i] + 1):
                c = l - 0.5
                acc += cos(c * pu) * cos(c * ps)
            ov[i] = 2.0 * acc / mv[i]
    return out.reshape(shape)


def cos_projections(cosmat, increments):
    cdef const double[:, ::1] cm = np.ascontiguousarray(cosmat, dtype=np.float64)
    cdef const double[:, ::1] inc = np.ascontiguousarray(np.atleast_2d(increments), dtype=np.float64)
    cdef Py_ssize_t R = inc.shape[0], M = cm.shape[0], N = cm.shape[1]
    out = np.empty((R, M))
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t r, l, k
    cdef double acc
    with nogil:
        for r in range(R):
            for l in range(M):
                acc = 0.0
                for k in range(N):
                    acc += cm[l, k] * inc[r, k]
                ov[r, l] = acc
    return out


def pair_product_sum(a1, b1, a2, b2, ws, wu, wdiag, m, bint triangle):
    a1 = np.ascontiguousarray(a1, dtype=np.float64)
    b1 = np.ascontiguousarray(b1, dtype=np.float64)
    a2 = np.ascontiguousarray(a2, dtype=np.float64)
    b2 = np.ascontiguousarray(b2, dtype=np.float64)
    cdef bint same = np.array_equal(a1, a2) and np.array_equal(b1, b2)
    cdef const double[::1] x1 = a1, y1 = b1, x2 = a2, y2 = b2
    cdef const double[::1] vs = np.ascontiguousarray(ws, dtype=np.float64)
    cdef const double[::1] vu = np.ascontiguousarray(wu, dtype=np.float64)
    cdef const double[::1] vd = np.ascontiguousarray(wdiag, dtype=np.float64)
    cdef double mm = <double>m
    cdef Py_ssize_t n = x1.shape[0], p, q, qmax
    cdef double total = 0.0, row, d1, d2
    with nogil:
        for p in range(n):
            row = 0.0
            qmax = p if triangle else n
            for q in range(qmax):
                d1 = _kern(x1[p], y1[q], mm)
                d2 = d1 if same else _kern(x2[p], y2[q], mm)
                row += d1 * d2 * vu[q]
            total += row * vs[p]
            if triangle:
                d1 = _kern(x1[p], y1[p], mm)
                d2 = d1 if same else _kern(x2[p], y2[p], mm)
                total += d1 * d2 * vd[p]
    return total


def lp_row_integrals(a_s, b_u, wu, m, double p):
    cdef const double[::1] av = np.ascontiguousarray(a_s, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(b_u, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(wu, dtype=np.float64)
    cdef double mm = <double>m
    out = np.empty(av.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i, q
    cdef double acc, d
    with nogil:
        for i in range(av.shape[0]):
            acc = 0.0
            for q in range(bv.shape[0]):
                d = fabs(_kern(bv[q], av[i], mm))
                if p == 2.0:
                    acc += d * d * wv[q]
                else:
                    acc += pow(d, p) * wv[q]
            ov[i] = acc
    return out
