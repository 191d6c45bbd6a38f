# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled recurrence kernels.

Every routine here has a twin in ``_kernels_py`` performing the same IEEE
operations in the same order (Dekker splitting, no fused multiply-add), so
both backends return bitwise-identical arrays.

The Laguerre recurrences carry double-double state: forward recurrence in
the degree loses about ``n * eps`` relative accuracy in plain doubles, which
is visible at ``n ~ 1e3``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, log, cbrt, ceil

cnp.import_array()

cdef double _BIG = 1e250
cdef double _SMALL = 1e-250
cdef double _SCALE_UP = 2.0 ** 600
cdef double _SCALE_DOWN = 2.0 ** -600
cdef double _SPLIT = 134217729.0


cdef inline void _two_sum(double a, double b, double* s, double* e) noexcept nogil:
    cdef double t = a + b
    cdef double bb = t - a
    s[0] = t
    e[0] = (a - (t - bb)) + (b - bb)


cdef inline void _fast_two_sum(double a, double b, double* s, double* e) noexcept nogil:
    cdef double t = a + b
    s[0] = t
    e[0] = b - (t - a)


cdef inline void _two_prod(double a, double b, double* p, double* e) noexcept nogil:
    cdef double t = a * b
    cdef double c = _SPLIT * a
    cdef double ah = c - (c - a)
    cdef double al = a - ah
    c = _SPLIT * b
    cdef double bh = c - (c - b)
    cdef double bl = b - bh
    p[0] = t
    e[0] = ((ah * bh - t) + ah * bl + al * bh) + al * bl


cdef inline void _dd_mul(double ah, double al, double bh, double bl,
                         double* rh, double* rl) noexcept nogil:
    cdef double p, e
    _two_prod(ah, bh, &p, &e)
    e = e + (ah * bl + al * bh)
    _fast_two_sum(p, e, rh, rl)


cdef inline void _dd_sub(double ah, double al, double bh, double bl,
                         double* rh, double* rl) noexcept nogil:
    cdef double s, e
    _two_sum(ah, -bh, &s, &e)
    e = e + (al - bl)
    _fast_two_sum(s, e, rh, rl)


cdef inline void _dd_div_d(double ah, double al, double b,
                           double* rh, double* rl) noexcept nogil:
    cdef double q1 = ah / b
    cdef double p, e
    _two_prod(q1, b, &p, &e)
    cdef double r = (((ah - p) - e) + al) / b
    _fast_two_sum(q1, r, rh, rl)


cdef inline void _lag_step(double k, double alpha, double x, double s,
                           double h0, double t0, double h1, double t1,
                           double* h2, double* t2) noexcept nogil:
    # (k+1) L_{k+1} = ((2k+1+alpha) - x) s L_k - (k+alpha) s^2 L_{k-1}
    cdef double ah, al, bh, bl, uh, ul, vh, vl
    _two_sum(2.0 * k + 1.0 + alpha, -x, &ah, &al)
    _dd_mul(ah, al, s, 0.0, &ah, &al)
    _dd_mul(k + alpha, 0.0, s, 0.0, &bh, &bl)
    _dd_mul(bh, bl, s, 0.0, &bh, &bl)
    _dd_mul(ah, al, h1, t1, &uh, &ul)
    _dd_mul(bh, bl, h0, t0, &vh, &vl)
    _dd_sub(uh, ul, vh, vl, &uh, &ul)
    _dd_div_d(uh, ul, k + 1.0, h2, t2)


def laguerre_seq(Py_ssize_t n_max, double alpha, double x, double scale=1.0):
    """Return ``scale**k * L_k^alpha(x)`` for ``k = 0..n_max``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n_max + 1)
    cdef double[::1] o = out
    cdef double h0, t0, h1, t1, h2, t2
    cdef Py_ssize_t k
    o[0] = 1.0
    if n_max == 0:
        return out
    h0 = 1.0
    t0 = 0.0
    _two_sum(1.0 + alpha, -x, &h1, &t1)
    _dd_mul(h1, t1, scale, 0.0, &h1, &t1)
    o[1] = h1
    for k in range(1, n_max):
        _lag_step(<double>k, alpha, x, scale, h0, t0, h1, t1, &h2, &t2)
        o[k + 1] = h2
        h0 = h1
        t0 = t1
        h1 = h2
        t1 = t2
    return out


def laguerre_table(Py_ssize_t n_max, double[::1] alphas, double x):
    """Scaled ``L_k^alpha(x)`` with shape ``(len(alphas), n_max + 1)``.

    Returns ``(mant, exps)`` with ``L = mant * 2**(600 * exps)``; rescaling
    by an exact power of two keeps large-degree rows finite.
    """
    cdef Py_ssize_t na = alphas.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((na, n_max + 1))
    cdef cnp.ndarray[cnp.int64_t, ndim=2] ex = np.zeros((na, n_max + 1), dtype=np.int64)
    cdef double[:, ::1] o = out
    cdef cnp.int64_t[:, ::1] e = ex
    cdef double h0, t0, h1, t1, h2, t2, alpha
    cdef cnp.int64_t cnt
    cdef Py_ssize_t i, k
    with nogil:
        for i in range(na):
            alpha = alphas[i]
            o[i, 0] = 1.0
            if n_max == 0:
                continue
            cnt = 0
            h0 = 1.0
            t0 = 0.0
            _two_sum(1.0 + alpha, -x, &h1, &t1)
            o[i, 1] = h1
            for k in range(1, n_max):
                _lag_step(<double>k, alpha, x, 1.0, h0, t0, h1, t1, &h2, &t2)
                if fabs(h2) > _SCALE_UP:
                    h2 = h2 * _SCALE_DOWN
                    t2 = t2 * _SCALE_DOWN
                    h1 = h1 * _SCALE_DOWN
                    t1 = t1 * _SCALE_DOWN
                    cnt += 1
                o[i, k + 1] = h2
                e[i, k + 1] = cnt
                h0 = h1
                t0 = t1
                h1 = h2
                t1 = t2
    return out, ex


def log_factorial_dd(Py_ssize_t n_max):
    """Prefix sums of ``log k`` as double-double pairs ``(hi, lo)``.

    Differences ``(hi[a] - hi[b]) + (lo[a] - lo[b])`` give ``log(a!/b!)``
    with error growing in ``a - b`` only, not in ``log a!``.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] hi_arr = np.zeros(n_max + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lo_arr = np.zeros(n_max + 1)
    cdef double[::1] hi = hi_arr
    cdef double[::1] lo = lo_arr
    cdef double s = 0.0, c = 0.0, t, v, bb
    cdef Py_ssize_t k
    for k in range(2, n_max + 1):
        v = log(<double>k)
        t = s + v
        bb = t - s
        c += (s - (t - bb)) + (v - bb)
        s = t
        hi[k] = s
        lo[k] = c
    return hi_arr, lo_arr


def miller_start(Py_ssize_t n_max, double x):
    cdef double top = n_max if n_max > x else x
    cdef Py_ssize_t m = <Py_ssize_t>(ceil(top) + 60.0 + ceil(20.0 * cbrt(x)))
    if m % 2:
        m += 1
    return m


def bessel_seq(Py_ssize_t n_max, double x):
    """Return ``J_k(x)`` for ``k = 0..n_max`` and ``x >= 1e-3``.

    Miller's downward recurrence normalised by ``J_0 + 2 sum J_2k = 1``.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(n_max + 1)
    cdef double[::1] o = out
    cdef Py_ssize_t m = miller_start(n_max, x)
    cdef Py_ssize_t k, j
    cdef double bjp = 0.0, bj = 1.0, bjm, norm = 0.0
    if m % 2 == 0:
        norm = 2.0 * bj
    for k in range(m, 0, -1):
        bjm = (2.0 * k / x) * bj - bjp
        bjp = bj
        bj = bjm
        if k - 1 <= n_max:
            o[k - 1] = bj
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * bj
        if fabs(bj) > _BIG:
            bj *= _SMALL
            bjp *= _SMALL
            norm *= _SMALL
            for j in range(k - 1, n_max + 1):
                o[j] *= _SMALL
    norm += bj
    for j in range(n_max + 1):
        o[j] /= norm
    return out


def bessel_series(Py_ssize_t n, double x):
    """Power series for ``J_n(x)``, ``n >= 0``; accurate for ``|x|`` small."""
    cdef double h = 0.5 * x
    cdef double term, total
    cdef Py_ssize_t j, k
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    # h^n / n! as a plain product: libm and CPython lgamma differ in the last ulp
    term = 1.0
    for k in range(1, n + 1):
        term *= h / k
    total = term
    for j in range(1, 200):
        term *= -(h * h) / (j * (n + j))
        total += term
        if fabs(term) < 1e-17 * fabs(total):
            break
    return total
