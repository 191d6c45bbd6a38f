"""Classical-field treatment: Bessel sidebands of a plane wave crossing a
harmonically driven barrier."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, EvanescentModeError
from .params import ModelParams, half_angle_sine
from .specfun import bessel_j_seq

__all__ = ["ModelParams", "SidebandSpectrum", "beta_eta", "classical_spectrum",
           "sideband_spectrum", "k_ratio"]

# Past n = |beta| + 200 every J_n(beta) is far below double precision.
_BESSEL_HEADROOM = 200


@dataclass(frozen=True)
class SidebandSpectrum:
    """Transmitted sidebands ``c_n |k_n>`` over the window ``n_min..n_max``."""

    n_min: int
    n_max: int
    amplitudes: np.ndarray
    k_ratio: np.ndarray
    beta: float
    eta: float
    tail_mass: float
    probabilities: np.ndarray

    @property
    def orders(self):
        return np.arange(self.n_min, self.n_max + 1)

    def amplitude(self, n):
        if not self.n_min <= n <= self.n_max:
            return 0j
        return complex(self.amplitudes[n - self.n_min])

    def probability(self, n):
        if not self.n_min <= n <= self.n_max:
            return 0.0
        return float(self.probabilities[n - self.n_min])

    def total_probability(self):
        return math.fsum(self.probabilities)

    def mean_order(self):
        """``sum n |c_n|^2``, the mean energy shift in units of ``hbar omega``."""
        return math.fsum(self.orders * self.probabilities)


def beta_eta(params):
    """Return ``(beta, eta)`` with ``beta = 2 v sin(wt/2)``, ``eta = phi + wt/2 + pi/2``.

    ``params.lambda_bar`` plays the role of ``V / hbar omega`` here.
    """
    beta = 2.0 * params.lambda_bar * half_angle_sine(params.omega_tau)
    eta = params.phi + 0.5 * params.omega_tau + 0.5 * math.pi
    return beta, eta


def k_ratio(orders, e0_ratio):
    """``k_n / k_0 = sqrt(1 + n / e0_ratio)``; raises on evanescent orders."""
    orders = np.asarray(orders)
    arg = 1.0 + orders / e0_ratio
    if np.any(arg <= 0):
        bad = int(orders[np.argmax(arg <= 0)])
        raise EvanescentModeError(
            f"sideband n={bad} has k_n^2 <= 0 at E0/hbar*omega={e0_ratio:g}"
        )
    return np.sqrt(arg)


def sideband_spectrum(beta, eta, e0_ratio, tail_tol=1e-12):
    """Sidebands ``J_n(beta) exp(-i n eta)`` windowed to discard < ``tail_tol``.

    The window starts at ``ceil|beta| + 10`` and grows by 8. All Bessel values
    come from one recurrence pass whose extent depends on ``beta`` only, so
    widening the window never alters an amplitude already present.
    """
    if not 0.0 < tail_tol < 1.0:
        raise DomainError(f"tail_tol must lie in (0, 1), got {tail_tol!r}")
    top = int(math.ceil(abs(beta))) + _BESSEL_HEADROOM
    jpos = bessel_j_seq(top, beta)
    sq = jpos * jpos
    n = int(math.ceil(abs(beta))) + 10
    while True:
        tail = 2.0 * math.fsum(sq[n + 1:])
        if tail < tail_tol:
            break
        n += 8
        if n >= top - 8:
            raise ConvergenceError(f"tail_tol={tail_tol:g} unreachable for beta={beta:g}")
    orders = np.arange(-n, n + 1)
    k = np.abs(orders)
    sign = np.where((orders < 0) & (k % 2 == 1), -1.0, 1.0)
    jn = sign * jpos[k]
    probabilities = jpos[k] ** 2
    amplitudes = jn * np.exp(-1j * (orders * eta))
    return SidebandSpectrum(
        n_min=-n,
        n_max=n,
        amplitudes=amplitudes,
        k_ratio=k_ratio(orders, e0_ratio),
        beta=float(beta),
        eta=float(eta),
        tail_mass=tail,
        probabilities=probabilities,
    )


def classical_spectrum(params, tail_tol=1e-12):
    """Transmitted sideband spectrum for a classical drive of amplitude
    ``params.lambda_bar * hbar omega``.

    Raises
    ------
    EvanescentModeError
        If a retained sideband has ``k_n^2 <= 0``, i.e. the incident energy
        is too small for the no-reflection regime.
    """
    beta, eta = beta_eta(params)
    return sideband_spectrum(beta, eta, params.e0_ratio, tail_tol)
