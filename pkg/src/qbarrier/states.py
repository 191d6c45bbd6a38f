"""Vacuum, thermal and coherent input states of the field.

The coherent case is position resolved: after transit the field is left in
the coherent state ``|xi(x)>`` with ``xi = alpha + Lambda exp(i phi_Lambda(x))``,
where ``x`` is the particle's position measured in units of the spatial
period ``2 pi v0 / omega``.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .classical import sideband_spectrum
from .errors import (ConvergenceError, DegenerateError, DomainError, RegimeError,
                     RegimeWarning)
from .params import TWO_PI, Coherent, Thermal, fold_phase
from .quantized import FinalEnergies, PhotonDistribution, probability_block
from .specfun import laguerre_seq, log_factorial_array

__all__ = [
    "poisson_distribution", "vacuum_distribution", "thermal_distribution",
    "thermal_mixture", "phi_lambda", "detector_positions", "CoherentLabel",
    "coherent_output_label", "coherent_amplitude_phase", "conditional_distribution",
    "fresnel_circle", "Posterior", "detector_correlation", "coherent_field_purity",
    "coherent_energies", "mean_photons_over_period", "classical_limit_spectrum",
    "particle_sidebands", "REGIME_FACTOR", "VACUUM_Y",
]

VACUUM_Y = 1e-12
REGIME_FACTOR = 20.0
POSTERIOR_POINTS = 1024
PURITY_TOL = 1e-8


def _check_tol(tail_tol):
    if not 0.0 < tail_tol < 1.0:
        raise DomainError(f"tail_tol must lie in (0, 1), got {tail_tol!r}")


def _as_coherent(state):
    if not isinstance(state, Coherent):
        raise DomainError(f"expected a Coherent state, got {type(state).__name__}")
    return state


# -- Poisson laws ----------------------------------------------------------


def _poisson_log_pmf(n, mean):
    lf = log_factorial_array(int(n[-1]))[n]
    return n * math.log(mean) - mean - lf


def poisson_distribution(mean, tail_tol=1e-12):
    """Poisson law with the given mean on a window certified by tail bounds.

    Beyond the window the pmf ratios ``mean / (k + 1)`` (upper side) and
    ``k / mean`` (lower side) are below one, so each tail is bounded by a
    geometric series started at the first excluded term.
    """
    _check_tol(tail_tol)
    if not (math.isfinite(mean) and mean >= 0):
        raise DomainError(f"Poisson mean must be finite and >= 0, got {mean!r}")
    if mean == 0.0:
        return PhotonDistribution(p=np.array([1.0]), tail_bound=0.0)
    width = 10.0 + 8.0 * math.sqrt(mean)
    while True:
        lo = max(0, int(math.floor(mean - width)))
        hi = int(math.ceil(mean + width))
        n = np.arange(lo, hi + 2)
        logp = _poisson_log_pmf(n, mean)
        upper = math.exp(logp[-1]) / (1.0 - mean / (hi + 2))
        lower = 0.0
        if lo > 0:
            lower = math.exp(_poisson_log_pmf(np.array([lo - 1]), mean)[0])
            lower /= 1.0 - (lo - 1) / mean
        if upper + lower < tail_tol:
            return PhotonDistribution(p=np.exp(logp[:-1]), tail_bound=upper + lower, n_min=lo)
        width *= 1.5


def vacuum_distribution(params, tail_tol=1e-12):
    """Final photon law for a vacuum input: Poisson with mean ``Lambda^2``."""
    return poisson_distribution(params.cap_lambda ** 2, tail_tol)


# -- thermal input ---------------------------------------------------------


def _thermal_y(y):
    y = y.y if isinstance(y, Thermal) else float(y)
    if not 0.0 <= y < 1.0:
        raise DomainError(f"thermal y must lie in [0, 1), got {y!r}")
    return y


def _geometric(y, tail_tol):
    if y == 0.0:
        return PhotonDistribution(p=np.array([1.0]), tail_bound=0.0)
    n_max = int(math.ceil(math.log(tail_tol) / math.log(y)))
    n = np.arange(n_max + 1)
    return PhotonDistribution(p=(1.0 - y) * y ** n, tail_bound=y ** (n_max + 1))


def thermal_distribution(params, y, tail_tol=1e-12, verify=False):
    """Final photon law for a thermal input with Boltzmann ratio ``y``.

    Closed form ``exp(-X(1-y)) (1-y) y^n L_n(-X(1-y)^2/y)`` with
    ``X = Lambda^2``. The factor ``y^n`` is folded into the Laguerre
    recurrence so the ``1/y`` in the argument never appears on its own;
    ``y < 1e-12`` is the zero-temperature limit and returns the vacuum law.

    Parameters
    ----------
    params : ModelParams
    y : float or Thermal
    tail_tol : float
        Target for the unitarity defect ``1 - sum p``.
    verify : bool
        Also compare against :func:`thermal_mixture`; a deviation above
        ``1e-8`` raises ``ConvergenceError``.
    """
    _check_tol(tail_tol)
    y = _thermal_y(y)
    x = params.cap_lambda ** 2
    if y < VACUUM_Y:
        dist = vacuum_distribution(params, tail_tol)
    elif x == 0.0:
        dist = _geometric(y, tail_tol)
    else:
        dist = _thermal_closed_form(x, y, tail_tol)
    if verify:
        ref = thermal_mixture(params, y, n_max=dist.n_max, tail_tol=tail_tol)
        dev = float(np.max(np.abs(dist.dense(dist.n_max) - ref.dense(dist.n_max))))
        if dev > 1e-8:
            raise ConvergenceError(f"thermal closed form deviates from the mixture by {dev:.3g}")
    return dist


def _thermal_closed_form(x, y, tail_tol):
    z = -x * (1.0 - y) ** 2 / y
    pref = math.exp(-x * (1.0 - y)) * (1.0 - y)
    nbar = y / (1.0 - y)
    var = nbar * (nbar + 1.0) + x * (2.0 * nbar + 1.0)
    n_max = int(math.ceil(nbar + x + 12.0 * math.sqrt(var) + 20.0))
    edge_tol = 1e-3 * tail_tol
    for _ in range(40):
        p = pref * laguerre_seq(n_max, 0, z, scale=y)
        if not np.all(np.isfinite(p)):
            raise ConvergenceError(f"thermal law overflowed at Lambda^2={x:g}, y={y:g}")
        defect = 1.0 - math.fsum(p)
        if math.fsum(p[-4:]) < edge_tol and abs(defect) < tail_tol:
            return PhotonDistribution(p=np.maximum(p, 0.0), tail_bound=max(defect, 0.0))
        n_max = int(n_max * 1.5) + 8
    raise ConvergenceError(f"thermal law not certified to tail_tol={tail_tol:g}")


def thermal_mixture(params, y, n_max=None, tail_tol=1e-12):
    """Thermal law as the Fock mixture ``sum_n0 (1-y) y^n0 P_{n0,n}``.

    Rows stop at the first ``K`` with ``y^(K+1) < tail_tol``. The reported
    tail bound adds the dropped geometric weight to the weighted row mass
    lying above ``n_max``.
    """
    _check_tol(tail_tol)
    y = _thermal_y(y)
    cap = abs(params.cap_lambda)
    k_max = 0 if y == 0.0 else int(math.floor(math.log(tail_tol) / math.log(y)))
    if n_max is None:
        n_max = k_max + int(math.ceil(cap * cap + 8.0 * cap * math.sqrt(k_max + cap * cap + 1.0))) + 20
    rows = np.arange(k_max + 1)
    w = (1.0 - y) * y ** rows
    pb = probability_block(params, rows, np.arange(n_max + 1))
    p = np.array([math.fsum(col) for col in (w[:, None] * pb).T])
    row_mass = np.array([math.fsum(r) for r in pb])
    spill = math.fsum(w * np.maximum(1.0 - row_mass, 0.0))
    return PhotonDistribution(p=p, tail_bound=y ** (k_max + 1) + spill)


# -- coherent input ---------------------------------------------------------


def phi_lambda(params, x_over_period):
    """``omega_tau/2 - 2 pi x - pi/2`` folded to ``[0, 2 pi)``."""
    return fold_phase(0.5 * params.omega_tau - TWO_PI * x_over_period - 0.5 * math.pi)


def _fold_unit(x):
    r = x - math.floor(x)
    return 0.0 if r >= 1.0 else r


def detector_positions(params, state):
    """Positions ``(x_plus, x_minus)`` in ``[0, 1)`` periods.

    ``x_plus`` aligns ``Lambda exp(i phi_Lambda)`` with ``alpha`` so that
    ``|xi| = |alpha| + |Lambda|``; ``x_minus`` is half a period away, where the
    two are antiparallel. For a negative ``Lambda`` (``omega_tau`` in
    ``(2 pi, 4 pi)`` and so on) the two phase conditions trade places.
    """
    state = _as_coherent(state)
    target = state.phi_alpha + (math.pi if params.cap_lambda < 0 else 0.0)
    x_plus = _fold_unit((0.5 * params.omega_tau - 0.5 * math.pi - target) / TWO_PI)
    return x_plus, _fold_unit(x_plus + 0.5)


@dataclass(frozen=True)
class CoherentLabel:
    """Label ``xi`` of the field's coherent state given the particle at ``x``."""

    xi: complex
    x_over_period: float
    phi_lambda: float

    @property
    def mean_photons(self):
        return abs(self.xi) ** 2


def coherent_output_label(params, state, x_over_period):
    """``xi = alpha + Lambda exp(i phi_Lambda(x))``."""
    state = _as_coherent(state)
    ph = phi_lambda(params, x_over_period)
    cap = params.cap_lambda
    xi = state.alpha + complex(cap * math.cos(ph), cap * math.sin(ph))
    return CoherentLabel(xi=xi, x_over_period=float(x_over_period), phi_lambda=ph)


def coherent_amplitude_phase(params, state, x_over_period):
    """Phase multiplying ``exp(i k0 x) |xi(x)>`` in the transmitted state.

    ``lambda^2 (omega_tau - sin omega_tau) + Lambda |alpha| sin(phi_Lambda - phi_alpha)``.
    """
    state = _as_coherent(state)
    lam2 = params.lambda_bar ** 2
    ph = phi_lambda(params, x_over_period)
    return (lam2 * (params.omega_tau - math.sin(params.omega_tau))
            + params.cap_lambda * state.alpha_abs * math.sin(ph - state.phi_alpha))


def conditional_distribution(params, state, x_over_period, tail_tol=1e-12):
    """Photon law of the field once the particle is found at ``x``: Poisson(|xi|^2)."""
    label = coherent_output_label(params, state, x_over_period)
    return poisson_distribution(label.mean_photons, tail_tol)


def fresnel_circle(params, state, n_points=256):
    """Sample ``xi(x)`` at ``x = k / n_points``; returns ``(x, xi)`` arrays."""
    state = _as_coherent(state)
    if n_points < 1:
        raise DomainError("n_points must be >= 1")
    x = np.arange(n_points) / n_points
    ph = np.array([phi_lambda(params, v) for v in x])
    cap = params.cap_lambda
    return x, state.alpha + cap * (np.cos(ph) + 1j * np.sin(ph))


def mean_photons_over_period(params, state, n_points=256):
    """Average of ``|xi(x)|^2`` over one period (equals ``|alpha|^2 + Lambda^2``)."""
    _, xi = fresnel_circle(params, state, n_points)
    return math.fsum(np.abs(xi) ** 2) / n_points


def coherent_energies(params, state):
    """Post-transit energies for a coherent input, in units of ``hbar omega``.

    Particle ``E0 - Lambda^2``, field ``|alpha|^2 + Lambda^2 + 1/2``.
    """
    state = _as_coherent(state)
    x = params.cap_lambda ** 2
    if params.e0_ratio <= x:
        raise DomainError(f"E0/hbar*omega={params.e0_ratio:g} must exceed Lambda^2={x:g}")
    return FinalEnergies(particle=params.e0_ratio - x, field=state.alpha_abs ** 2 + x + 0.5)


@dataclass(frozen=True)
class Posterior:
    """Posterior density of the particle position given ``n_detect`` photons.

    ``density`` integrates to one over the period with the rectangle rule on
    the grid ``x``; ``resolution`` is the grid spacing.
    """

    x: np.ndarray
    density: np.ndarray
    n_detect: int
    resolution: float

    @property
    def mode(self):
        return float(self.x[int(np.argmax(self.density))])


def detector_correlation(params, state, n_detect, n_points=POSTERIOR_POINTS):
    """``p(x | n) ~ Poisson(n; |xi(x)|^2)`` under a flat prior over one period.

    Raises
    ------
    DegenerateError
        If ``Lambda = 0``: ``xi`` does not depend on ``x`` and the posterior
        is flat.
    """
    state = _as_coherent(state)
    if n_detect < 0 or int(n_detect) != n_detect:
        raise DomainError(f"n_detect must be a nonnegative integer, got {n_detect!r}")
    if params.cap_lambda == 0.0:
        raise DegenerateError("Lambda = 0: photon counts carry no position information")
    n_detect = int(n_detect)
    x, xi = fresnel_circle(params, state, n_points)
    mu = np.abs(xi) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        logl = np.where(mu > 0, n_detect * np.log(mu), -np.inf if n_detect else 0.0) - mu
    logl -= logl.max()
    w = np.exp(logl)
    h = 1.0 / n_points
    density = w / (math.fsum(w) * h)
    return Posterior(x=x, density=density, n_detect=n_detect, resolution=h)


def _purity_sum(cap, n):
    # On a uniform periodic grid each row of |<xi_i|xi_j>|^2 is a cyclic
    # shift of the first, so the double mean equals the single one.
    theta = TWO_PI * np.arange(n) / n
    return math.fsum(np.exp(-2.0 * cap * cap * (1.0 - np.cos(theta)))) / n


def coherent_field_purity(params, state, quad_points=256):
    """Purity ``Tr rho^2`` of the reduced field state.

    ``rho`` mixes ``|xi(x)><xi(x)|`` uniformly over one period, so
    ``Tr rho^2`` is the double period average of ``exp(-|xi(x) - xi(x')|^2)``,
    evaluated with the trapezoidal rule and checked against ``2*quad_points``.
    It depends on ``Lambda`` only.
    """
    _as_coherent(state)
    if quad_points < 64:
        raise DomainError(f"quad_points must be >= 64, got {quad_points}")
    cap = params.cap_lambda
    if cap == 0.0:
        return 1.0
    a = _purity_sum(cap, quad_points)
    b = _purity_sum(cap, 2 * quad_points)
    if abs(a - b) > PURITY_TOL:
        raise ConvergenceError(
            f"purity changed by {abs(a - b):.3g} when doubling quad_points={quad_points}"
        )
    return b


def classical_limit_spectrum(params, state, tail_tol=1e-12, strict=True):
    """Particle sidebands ``J_n(Lambda |alpha|) exp(-i n eta)`` for ``|alpha| >> Lambda``.

    ``eta`` is the classical phase with the drive phase set to ``-phi_alpha``.
    Below ``|alpha| = 20 |Lambda|`` the product-state limit is not trusted:
    ``strict=True`` raises ``RegimeError``, ``strict=False`` emits a
    ``RegimeWarning`` and computes anyway.
    """
    state = _as_coherent(state)
    cap = params.cap_lambda
    if state.alpha_abs < REGIME_FACTOR * abs(cap):
        msg = (f"|alpha|={state.alpha_abs:g} is below {REGIME_FACTOR:g}*|Lambda|="
               f"{REGIME_FACTOR * abs(cap):g}; classical limit not reached")
        if strict:
            raise RegimeError(msg)
        warnings.warn(msg, RegimeWarning, stacklevel=2)
    beta = cap * state.alpha_abs
    eta = -state.phi_alpha + 0.5 * params.omega_tau + 0.5 * math.pi
    return sideband_spectrum(beta, eta, params.e0_ratio, tail_tol)


def particle_sidebands(params, state, n_points=1024):
    """Sideband amplitudes of the position-dependent phase, by FFT.

    Takes ``exp(i Lambda |alpha| sin(phi_Lambda(x) - phi_alpha))`` on a grid over
    one period and returns ``(orders, amplitudes)`` where order ``n`` is the
    coefficient of ``exp(+2 pi i n x)``, the plane wave ``k_n``. Independent
    of any Bessel routine, so it cross-checks :func:`classical_limit_spectrum`.
    """
    state = _as_coherent(state)
    x = np.arange(n_points) / n_points
    ph = 0.5 * params.omega_tau - TWO_PI * x - 0.5 * math.pi
    z = params.cap_lambda * state.alpha_abs
    f = np.exp(1j * z * np.sin(ph - state.phi_alpha))
    c = np.fft.fft(f) / n_points
    orders = np.fft.fftfreq(n_points, d=1.0 / n_points).astype(np.int64)
    # fft's kernel is exp(-2 pi i k j / N), i.e. it extracts exp(+2 pi i k x).
    idx = np.argsort(orders)
    return orders[idx], c[idx]

