"""Independent reference implementations used only by the tests.

None of these share code with the package: Laguerre polynomials come from
the explicit finite sum in exact rationals, Bessel functions and
log-factorials from mpmath, Poisson laws from scipy.
"""

import math
from fractions import Fraction

import mpmath
import numpy as np
from scipy import special, stats


def laguerre_exact(n, alpha, x):
    """``L_n^alpha(x) = sum_k (-1)^k C(n+alpha, n-k) x^k / k!`` in rationals."""
    x = Fraction(x)
    total = Fraction(0)
    for k in range(n + 1):
        total += (-1) ** k * math.comb(n + alpha, n - k) * x ** k / math.factorial(k)
    return total


def bessel_mp(n, x, dps=40):
    with mpmath.workdps(dps):
        return float(mpmath.besselj(n, x))


def log_factorial_mp(n, dps=40):
    with mpmath.workdps(dps):
        return mpmath.loggamma(n + 1)


def poisson(mean, n):
    return stats.poisson.pmf(np.asarray(n), mean)


def poisson_entropy(mean, tail=1e-16):
    """``-sum p ln p`` summed until the remaining tail mass is below ``tail``.

    Past ``n > mean`` the pmf ratio ``mean / (n + 1)`` is below one, so the
    unsummed mass is bounded by a geometric series.
    """
    total = 0.0
    n = 0
    while True:
        p = math.exp(n * math.log(mean) - mean - math.lgamma(n + 1.0)) if mean else float(n == 0)
        if p > 0:
            total -= p * math.log(p)
        n += 1
        r = mean / (n + 1.0)
        if r < 1.0 and p * r / (1.0 - r) < tail:
            return total


def fock_probability_mp(n0, n, cap, dps=50):
    """``n0!/n! e^{-x} x^(n-n0) L_{n0}^{n-n0}(x)^2`` with ``x = cap^2`` in mpmath.

    Uses mpmath's own Laguerre with a real upper index, so negative
    ``n - n0`` goes through the hypergeometric definition rather than the
    reflection identity used in the package.
    """
    with mpmath.workdps(dps):
        x = mpmath.mpf(cap) ** 2
        if n >= n0:
            lag = mpmath.laguerre(n0, n - n0, x)
            val = (mpmath.factorial(n0) / mpmath.factorial(n)) * mpmath.exp(-x) \
                * x ** (n - n0) * lag ** 2
        else:
            # generalized Laguerre with negative integer index as a finite sum
            m = n0 - n
            lag = mpmath.fsum((-1) ** k * mpmath.binomial(n0 - m, n0 - k) * x ** k
                              / mpmath.factorial(k) for k in range(n0 + 1))
            val = (mpmath.factorial(n0) / mpmath.factorial(n)) * mpmath.exp(-x) \
                * x ** (n - n0) * lag ** 2
        return float(val)


def jv(n, x):
    return special.jv(n, x)
