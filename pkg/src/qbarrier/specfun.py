"""Special functions: log-factorials, generalized Laguerre polynomials and
integer-order Bessel functions of the first kind.

All routines take real arguments and return Python floats (or float64 arrays
for the ``*_seq`` variants). The recurrences run in the compiled kernel when
available, see :mod:`qbarrier._backend`.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._backend import kernels
from .errors import DomainError

EPS = np.finfo(float).eps
BESSEL_MAX_ARG = 1.0e4
_SERIES_CUTOFF = 1.0e-3
_EXACT_TABLE = 256


@dataclass(frozen=True)
class EvalReport:
    """A computed value with a heuristic absolute error estimate."""

    value: float
    abs_error_bound: float

    def __post_init__(self):
        if self.abs_error_bound < 0 or (
            math.isfinite(self.value) and not math.isfinite(self.abs_error_bound)
        ):
            raise ValueError("abs_error_bound must be finite and nonnegative")


def _check_int(name, n):
    if isinstance(n, (bool, np.bool_)) or not isinstance(n, (int, np.integer)):
        if isinstance(n, (float, np.floating)) and float(n).is_integer():
            return int(n)
        raise TypeError(f"{name} must be an integer, got {n!r}")
    return int(n)


@lru_cache(maxsize=None)
def _log_factorial_table():
    return np.array([math.log(math.factorial(k)) for k in range(_EXACT_TABLE)])


def log_factorial(n):
    """Natural log of ``n!``.

    Exact-integer factorials are used below 256 (correctly rounded log of an
    exact integer); ``math.lgamma`` above that.
    """
    n = _check_int("n", n)
    if n < 0:
        raise DomainError(f"log_factorial needs n >= 0, got {n}")
    if n < _EXACT_TABLE:
        return float(_log_factorial_table()[n])
    return math.lgamma(n + 1.0)


def log_factorial_array(n_max):
    """``log(k!)`` for ``k = 0..n_max`` as a float64 array."""
    n_max = _check_int("n_max", n_max)
    table = _log_factorial_table()
    if n_max < _EXACT_TABLE:
        return table[: n_max + 1].copy()
    tail = [math.lgamma(k + 1.0) for k in range(_EXACT_TABLE, n_max + 1)]
    return np.concatenate([table, np.array(tail)])


def laguerre_seq(n_max, alpha, x, scale=1.0):
    """``scale**k * L_k^alpha(x)`` for ``k = 0..n_max`` by forward recurrence.

    ``alpha`` must be nonnegative here; the scale factor lets callers fold a
    geometric weight into the recurrence without overflowing ``L_k``.
    """
    n_max = _check_int("n_max", n_max)
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    if alpha < 0:
        raise DomainError("laguerre_seq needs alpha >= 0")
    return kernels.laguerre_seq(n_max, float(alpha), float(x), float(scale))


LOG_SCALE_STEP = 600.0 * math.log(2.0)


def laguerre_table(n_max, alphas, x):
    """``L_k^a(x)`` for each ``a`` in ``alphas`` (all >= 0) and ``k <= n_max``.

    Returns ``(mant, exps)`` with ``L = mant * 2**(600*exps)``, so rows whose
    values exceed the double range stay usable in log space.
    """
    alphas = np.ascontiguousarray(alphas, dtype=np.float64)
    if alphas.size and alphas.min() < 0:
        raise DomainError("laguerre_table needs nonnegative alphas")
    return kernels.laguerre_table(int(n_max), alphas, float(x))


@lru_cache(maxsize=8)
def _log_factorial_dd(n_max):
    hi, lo = kernels.log_factorial_dd(n_max)
    hi.setflags(write=False)
    lo.setflags(write=False)
    return hi, lo


def log_factorial_ratio(a, b):
    """``log(a! / b!)`` elementwise for integer arrays.

    Built from compensated prefix sums, so the rounding error scales with
    ``|a - b|`` rather than with ``log a!``; ``log(10001!/10000!)`` keeps
    full relative precision.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size and (a.min() < 0 or b.min() < 0):
        raise DomainError("log_factorial_ratio needs nonnegative arguments")
    top = int(max(a.max(initial=0), b.max(initial=0)))
    # round the cache key up so nearby calls share one table
    hi, lo = _log_factorial_dd(max(1024, 1 << top.bit_length()))
    return (hi[a] - hi[b]) + (lo[a] - lo[b])


def _laguerre_parts(n, alpha, x):
    """Return ``(poly, log_prefactor, sign)`` with ``L = sign*exp(lp)*poly``."""
    if alpha >= 0:
        return float(kernels.laguerre_seq(n, float(alpha), x, 1.0)[n]), 0.0, 1.0
    m = -alpha
    if m > n:
        raise DomainError(
            f"laguerre needs alpha >= -n for negative upper index, got n={n}, alpha={alpha}"
        )
    poly = float(kernels.laguerre_seq(n - m, float(m), x, 1.0)[n - m])
    if x == 0.0:
        return poly, -math.inf, 0.0
    log_pref = m * math.log(abs(x)) + log_factorial(n - m) - log_factorial(n)
    sign = -1.0 if (x > 0 and m % 2) else 1.0
    return poly, log_pref, sign


def laguerre(n, alpha, x):
    """Generalized Laguerre polynomial ``L_n^alpha(x)`` for integer ``alpha``.

    Nonnegative ``alpha`` uses the three-term recurrence in ``n``. Negative
    ``alpha = -m`` (with ``m <= n``) goes through
    ``L_n^{-m}(x) = (-x)^m (n-m)!/n! L_{n-m}^m(x)``.

    Raises
    ------
    DomainError
        If ``alpha < -n`` or ``n < 0``.
    """
    n = _check_int("n", n)
    alpha = _check_int("alpha", alpha)
    if n < 0:
        raise DomainError(f"laguerre needs n >= 0, got {n}")
    poly, log_pref, sign = _laguerre_parts(n, alpha, float(x))
    if sign == 0.0:
        return 0.0
    if log_pref == 0.0:
        return sign * poly
    return sign * math.exp(log_pref) * poly


def laguerre_report(n, alpha, x):
    """Like :func:`laguerre` but with a term-magnitude error estimate."""
    n = _check_int("n", n)
    alpha = _check_int("alpha", alpha)
    value = laguerre(n, alpha, x)
    deg, a = (n, alpha) if alpha >= 0 else (n + alpha, -alpha)
    seq = kernels.laguerre_seq(deg, float(a), float(x), 1.0)
    scale = float(np.max(np.abs(seq)))
    if alpha < 0:
        scale *= abs(value / seq[deg]) if seq[deg] != 0 else 0.0
    return EvalReport(value, 4.0 * EPS * (deg + 1) * max(scale, abs(value)))


def _bessel_nonneg(n_max, x):
    """``J_k(x)`` for ``k = 0..n_max`` and ``x >= 0``."""
    if x == 0.0:
        out = np.zeros(n_max + 1)
        out[0] = 1.0
        return out
    if x < _SERIES_CUTOFF:
        return np.array([kernels.bessel_series(k, x) for k in range(n_max + 1)])
    return kernels.bessel_seq(n_max, x)


def _check_bessel_arg(x):
    x = float(x)
    if not abs(x) <= BESSEL_MAX_ARG:
        raise DomainError(f"bessel_j supports |x| <= {BESSEL_MAX_ARG:g}, got {x!r}")
    return x


def bessel_j_seq(n_max, x):
    """``J_k(x)`` for ``k = 0..n_max`` (negative ``x`` allowed)."""
    n_max = _check_int("n_max", n_max)
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    x = _check_bessel_arg(x)
    out = _bessel_nonneg(n_max, abs(x))
    if x < 0:
        out[1::2] = -out[1::2]
    return out


def bessel_j(n, x):
    """Bessel function of the first kind ``J_n(x)`` for integer ``n``.

    Uses Miller's normalised downward recurrence (power series below
    ``|x| = 1e-3``). ``J_{-n} = (-1)^n J_n`` and ``J_n(-x) = (-1)^n J_n(x)``
    are applied as exact sign flips.
    """
    n = _check_int("n", n)
    x = _check_bessel_arg(x)
    k = abs(n)
    value = float(_bessel_nonneg(k, abs(x))[k])
    flips = (k % 2) * ((n < 0) + (x < 0))
    return -value if flips % 2 else value


def bessel_j_report(n, x):
    """Like :func:`bessel_j` but with a heuristic error estimate."""
    value = bessel_j(n, x)
    steps = kernels.miller_start(abs(_check_int("n", n)), abs(float(x)))
    return EvalReport(value, 4.0 * EPS * math.sqrt(steps) * max(1.0, abs(value)))
