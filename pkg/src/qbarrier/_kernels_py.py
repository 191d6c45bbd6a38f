"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``.

Operation order matches the Cython source exactly, including the
double-double helpers, so both backends return bitwise-identical arrays.
The helpers work unchanged on floats and on float64 arrays.
"""

import math

import numpy as np

_BIG = 1e250
_SMALL = 1e-250
_SCALE_UP = 2.0 ** 600
_SCALE_DOWN = 2.0 ** -600
_SPLIT = 134217729.0


def _two_sum(a, b):
    t = a + b
    bb = t - a
    return t, (a - (t - bb)) + (b - bb)


def _fast_two_sum(a, b):
    t = a + b
    return t, b - (t - a)


def _two_prod(a, b):
    t = a * b
    c = _SPLIT * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLIT * b
    bh = c - (c - b)
    bl = b - bh
    return t, ((ah * bh - t) + ah * bl + al * bh) + al * bl


def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return _fast_two_sum(p, e)


def _dd_sub(ah, al, bh, bl):
    s, e = _two_sum(ah, -bh)
    e = e + (al - bl)
    return _fast_two_sum(s, e)


def _dd_div_d(ah, al, b):
    q1 = ah / b
    p, e = _two_prod(q1, b)
    r = (((ah - p) - e) + al) / b
    return _fast_two_sum(q1, r)


def _lag_step(k, alpha, x, s, h0, t0, h1, t1):
    # (k+1) L_{k+1} = ((2k+1+alpha) - x) s L_k - (k+alpha) s^2 L_{k-1}
    ah, al = _two_sum(2.0 * k + 1.0 + alpha, -x)
    ah, al = _dd_mul(ah, al, s, 0.0)
    bh, bl = _dd_mul(k + alpha, 0.0, s, 0.0)
    bh, bl = _dd_mul(bh, bl, s, 0.0)
    uh, ul = _dd_mul(ah, al, h1, t1)
    vh, vl = _dd_mul(bh, bl, h0, t0)
    uh, ul = _dd_sub(uh, ul, vh, vl)
    return _dd_div_d(uh, ul, k + 1.0)


def laguerre_seq(n_max, alpha, x, scale=1.0):
    """Return ``scale**k * L_k^alpha(x)`` for ``k = 0..n_max``."""
    out = np.empty(n_max + 1)
    out[0] = 1.0
    if n_max == 0:
        return out
    alpha = float(alpha)
    x = float(x)
    s = float(scale)
    h0, t0 = 1.0, 0.0
    h1, t1 = _two_sum(1.0 + alpha, -x)
    h1, t1 = _dd_mul(h1, t1, s, 0.0)
    out[1] = h1
    for k in range(1, n_max):
        h2, t2 = _lag_step(float(k), alpha, x, s, h0, t0, h1, t1)
        out[k + 1] = h2
        h0, t0, h1, t1 = h1, t1, h2, t2
    return out


def laguerre_table(n_max, alphas, x):
    """Scaled ``L_k^alpha(x)`` with shape ``(len(alphas), n_max + 1)``.

    Returns ``(mant, exps)`` with ``L = mant * 2**(600 * exps)``. Vectorised
    over ``alphas``; the loop runs over the degree only.
    """
    alphas = np.ascontiguousarray(alphas, dtype=np.float64)
    na = alphas.shape[0]
    out = np.empty((na, n_max + 1))
    ex = np.zeros((na, n_max + 1), dtype=np.int64)
    out[:, 0] = 1.0
    if n_max == 0:
        return out, ex
    x = float(x)
    cnt = np.zeros(na, dtype=np.int64)
    h0 = np.ones(na)
    t0 = np.zeros(na)
    h1, t1 = _two_sum(1.0 + alphas, -x)
    out[:, 1] = h1
    for k in range(1, n_max):
        h2, t2 = _lag_step(float(k), alphas, x, 1.0, h0, t0, h1, t1)
        big = np.abs(h2) > _SCALE_UP
        if big.any():
            h2 = np.where(big, h2 * _SCALE_DOWN, h2)
            t2 = np.where(big, t2 * _SCALE_DOWN, t2)
            h1 = np.where(big, h1 * _SCALE_DOWN, h1)
            t1 = np.where(big, t1 * _SCALE_DOWN, t1)
            cnt = cnt + big
        out[:, k + 1] = h2
        ex[:, k + 1] = cnt
        h0, t0, h1, t1 = h1, t1, h2, t2
    return out, ex


def log_factorial_dd(n_max):
    """Prefix sums of ``log k`` as double-double pairs ``(hi, lo)``.

    Differences ``(hi[a] - hi[b]) + (lo[a] - lo[b])`` give ``log(a!/b!)``
    with error growing in ``a - b`` only, not in ``log a!``.
    """
    hi = np.zeros(n_max + 1)
    lo = np.zeros(n_max + 1)
    s = 0.0
    c = 0.0
    for k in range(2, n_max + 1):
        v = math.log(k)
        t = s + v
        bb = t - s
        c += (s - (t - bb)) + (v - bb)
        s = t
        hi[k] = s
        lo[k] = c
    return hi, lo


def miller_start(n_max, x):
    top = n_max if n_max > x else x
    m = int(math.ceil(top) + 60.0 + math.ceil(20.0 * float(np.cbrt(x))))
    if m % 2:
        m += 1
    return m


def bessel_seq(n_max, x):
    """Return ``J_k(x)`` for ``k = 0..n_max`` and ``x >= 1e-3``.

    Miller's downward recurrence normalised by ``J_0 + 2 sum J_2k = 1``.
    """
    x = float(x)
    out = np.zeros(n_max + 1)
    m = miller_start(n_max, x)
    bjp = 0.0
    bj = 1.0
    norm = 2.0 * bj if m % 2 == 0 else 0.0
    for k in range(m, 0, -1):
        bjm = (2.0 * k / x) * bj - bjp
        bjp = bj
        bj = bjm
        if k - 1 <= n_max:
            out[k - 1] = bj
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * bj
        if abs(bj) > _BIG:
            bj *= _SMALL
            bjp *= _SMALL
            norm *= _SMALL
            if k - 1 <= n_max:
                out[k - 1:] *= _SMALL
    norm += bj
    out /= norm
    return out


def bessel_series(n, x):
    """Power series for ``J_n(x)``, ``n >= 0``; accurate for ``|x|`` small."""
    x = float(x)
    h = 0.5 * x
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
        if abs(term) < 1e-17 * abs(total):
            break
    return total
