"""Quantized-field transition amplitudes ``t[n0 -> n]`` and derived observables.

Two closed forms are provided and kept deliberately separate:

* the *algebraic* route sums displacement-operator matrix elements over
  intermediate Fock states ``q`` with the free-field phase ``exp(-i(q-n)wt)``;
* the *analytic* route evaluates
  ``exp(i Phi) sqrt(n0!/n!) exp(-Lambda^2/2) Lambda^(n-n0) L_{n0}^{n-n0}(Lambda^2)``
  with the negative-upper-index Laguerre identity for ``n < n0``.

A third, brute-force route lives in :mod:`qbarrier.oracle`.
"""

import enum
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (ConvergenceError, DomainError, EvanescentModeError,
                     RegimeWarning, TruncationError)
from .params import ModelParams
from .specfun import LOG_SCALE_STEP, bessel_j, laguerre_table, log_factorial_ratio

__all__ = [
    "Route", "TransitionMatrix", "PhotonDistribution", "FinalEnergies",
    "displacement_element", "displacement_block", "t_algebraic", "t_analytic",
    "transition_matrix", "probability", "probability_block", "distribution_from",
    "final_energies", "asymmetry", "large_n0_probability", "entanglement_entropy",
    "global_phase",
]

COLUMN_TAIL_TOL = 1e-14
_TAIL_PROBE = 64
_MAX_GROWTH = 8


class Route(str, enum.Enum):
    ANALYTIC = "analytic"
    ALGEBRAIC = "algebraic"
    ORACLE = "oracle"


@dataclass(frozen=True)
class TransitionMatrix:
    """Amplitudes ``t[i, j] = t_{rows[i] -> j}`` for ``j = 0..n_max``."""

    rows: np.ndarray
    n_max: int
    t: np.ndarray
    lambda_bar: float
    omega_tau: float
    route: Route

    def __post_init__(self):
        self.rows.setflags(write=False)
        self.t.setflags(write=False)

    def entry(self, n0, n):
        i = int(np.searchsorted(self.rows, n0))
        if i >= len(self.rows) or self.rows[i] != n0:
            raise KeyError(f"row n0={n0} not in matrix")
        return complex(self.t[i, n])

    def probabilities(self):
        return np.abs(self.t) ** 2

    def row_sums(self):
        p = self.probabilities()
        return np.array([math.fsum(r) for r in p])


@dataclass(frozen=True)
class PhotonDistribution:
    """Photon-number weights ``p[k]`` for ``n = n_min + k``.

    ``tail_bound`` bounds the probability mass outside the stored window.
    """

    p: np.ndarray
    tail_bound: float
    n_min: int = 0

    def __post_init__(self):
        if np.any(self.p < 0):
            raise ValueError("photon distribution weights must be nonnegative")
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be nonnegative")
        self.p.setflags(write=False)

    @property
    def n(self):
        return np.arange(self.n_min, self.n_min + len(self.p))

    @property
    def n_max(self):
        return self.n_min + len(self.p) - 1

    def probability(self, n):
        k = n - self.n_min
        if 0 <= k < len(self.p):
            return float(self.p[k])
        return 0.0

    def total(self):
        return math.fsum(self.p)

    def mean(self):
        return math.fsum(self.n * self.p)

    def variance(self):
        mu = self.mean()
        return math.fsum((self.n - mu) ** 2 * self.p)

    def entropy(self):
        """Shannon entropy in nats, with ``0 ln 0 = 0``."""
        nz = self.p[self.p > 0]
        return 0.0 - math.fsum(nz * np.log(nz))

    def dense(self, n_max):
        """Weights for ``n = 0..n_max`` (mass outside the window dropped)."""
        out = np.zeros(n_max + 1)
        lo, hi = self.n_min, min(self.n_max, n_max)
        if hi >= lo:
            out[lo:hi + 1] = self.p[: hi - lo + 1]
        return out


class FinalEnergies(NamedTuple):
    """Post-transit expectation values in units of ``hbar omega``."""

    particle: float
    field: float


def global_phase(params):
    """``lambda_bar^2 (omega_tau - sin omega_tau)``, the diagonal part of Phi."""
    lam2 = params.lambda_bar * params.lambda_bar
    return lam2 * (params.omega_tau - math.sin(params.omega_tau))


# -- displacement operator -------------------------------------------------


def displacement_block(a, rows, cols):
    """Real matrix ``<m|D(a)|n>`` for ``m`` in ``rows`` and ``n`` in ``cols``.

    For ``m >= n`` this is ``sqrt(n!/m!) a^(m-n) exp(-a^2/2) L_n^(m-n)(a^2)``;
    for ``m < n`` it is ``(-1)^(n-m)`` times the same expression with ``m`` and
    ``n`` exchanged.
    """
    m = np.asarray(rows, dtype=np.int64)[:, None]
    n = np.asarray(cols, dtype=np.int64)[None, :]
    m, n = np.broadcast_arrays(m, n)
    a = float(a)
    if a == 0.0:
        return (m == n).astype(float)
    lo = np.minimum(m, n)
    hi = np.maximum(m, n)
    k = hi - lo
    ks, inv = np.unique(k, return_inverse=True)
    mant, exps = laguerre_table(int(lo.max()), ks.astype(float), a * a)
    idx = inv.reshape(k.shape)
    poly = mant[idx, lo]
    log_mag = (0.5 * log_factorial_ratio(lo, hi) + k * math.log(abs(a)) - 0.5 * a * a
               + exps[idx, lo] * LOG_SCALE_STEP)
    sign = np.where((m < n) & (k % 2 == 1), -1.0, 1.0)
    if a < 0:
        sign = sign * np.where(k % 2 == 1, -1.0, 1.0)
    out = sign * poly * np.exp(log_mag)
    if not np.all(np.isfinite(out)):
        raise ConvergenceError("displacement matrix element overflowed")
    return out


def displacement_element(m, n, a):
    """``<m|D(a)|n>`` for real displacement ``a``."""
    if m < 0 or n < 0:
        raise DomainError("Fock indices must be >= 0")
    return float(displacement_block(a, [m], [n])[0, 0])


# -- algebraic route -------------------------------------------------------


def default_q_max(n0, n, lambda_bar):
    return max(n0, n) + int(math.ceil(40.0 * (lambda_bar + 1.0)))


def _certified_columns(lam, cols, q_max, grow):
    for _ in range(_MAX_GROWTH):
        d = displacement_block(lam, np.arange(q_max + _TAIL_PROBE + 1), cols)
        tail = np.sum(d[q_max + 1:] ** 2, axis=0)
        if np.all(tail < COLUMN_TAIL_TOL):
            return d[: q_max + 1], q_max
        if not grow:
            raise TruncationError(
                f"displacement tail mass {tail.max():.3g} beyond q_max={q_max} "
                f"exceeds {COLUMN_TAIL_TOL:g}"
            )
        q_max += 32
    raise TruncationError(f"displacement columns not certified up to q_max={q_max}")


def t_algebraic(n0, n, params, q_max=None):
    """Intermediate-state sum
    ``exp(i lam^2 wt) sum_q <n|D^dag(lam)|q><q|D(lam)|n0> exp(-i(q-n) wt)``.

    With ``q_max=None`` the cutoff starts at ``max(n0, n) + ceil(40(lam+1))`` and
    grows until both displacement columns have tail mass below ``1e-14``. An
    explicit ``q_max`` that fails the certificate raises ``TruncationError``.
    """
    if n0 < 0 or n < 0:
        raise DomainError("Fock indices must be >= 0")
    lam = params.lambda_bar
    wt = params.omega_tau
    grow = q_max is None
    if grow:
        q_max = default_q_max(n0, n, lam)
    d, q_max = _certified_columns(lam, [n0, n], q_max, grow)
    q = np.arange(q_max + 1)
    ang = -(q - n) * wt
    w = d[:, 1] * d[:, 0]
    re = math.fsum(w * np.cos(ang))
    im = math.fsum(w * np.sin(ang))
    return complex(re, im) * complex(math.cos(lam * lam * wt), math.sin(lam * lam * wt))


def _algebraic_rows(params, rows, n_max, q_max):
    lam = params.lambda_bar
    wt = params.omega_tau
    cols = np.arange(n_max + 1)
    grow = q_max is None
    if grow:
        q_max = default_q_max(int(max(rows.max(), n_max)), 0, lam)
    need = np.union1d(rows, cols)
    d, q_max = _certified_columns(lam, need, q_max, grow)
    pos = {int(v): i for i, v in enumerate(need)}
    q = np.arange(q_max + 1)
    pref = complex(math.cos(lam * lam * wt), math.sin(lam * lam * wt))
    t = np.empty((len(rows), n_max + 1), dtype=complex)
    for i, n0 in enumerate(rows):
        u = d[:, pos[int(n0)]]
        for n in cols:
            ang = -(q - n) * wt
            w = d[:, pos[int(n)]] * u
            t[i, n] = complex(math.fsum(w * np.cos(ang)), math.fsum(w * np.sin(ang))) * pref
    return t


# -- analytic route --------------------------------------------------------


def _analytic_entries(params, n0, n):
    """Vectorised analytic amplitudes for broadcastable integer arrays."""
    n0, n = np.broadcast_arrays(np.asarray(n0, dtype=np.int64), np.asarray(n, dtype=np.int64))
    if np.any(n0 < 0) or np.any(n < 0):
        raise DomainError("Fock indices must be >= 0")
    cap = params.cap_lambda
    d = n - n0
    phi = global_phase(params) + d * (0.5 * params.omega_tau - 0.5 * math.pi)
    phase = np.cos(phi) + 1j * np.sin(phi)
    if cap == 0.0:
        return np.where(d == 0, phase, 0.0 + 0.0j)
    x = cap * cap
    m = np.abs(d)
    deg = np.minimum(n0, n)
    ms, inv = np.unique(m, return_inverse=True)
    mant, exps = laguerre_table(int(deg.max()), ms.astype(float), x)
    idx = inv.reshape(m.shape)
    poly = mant[idx, deg]
    lfr = log_factorial_ratio(n0, n)
    neg = d < 0
    # L_{n0}^{-m}(x) = (-x)^m (n0-m)!/n0! L_{n0-m}^m(x); here n0 - m = n.
    # log|cap| rather than log(x): cap^2 may underflow for tiny couplings
    lcap = math.log(abs(cap))
    log_identity = np.where(neg, 2.0 * m * lcap - lfr, 0.0)
    log_mag = (0.5 * lfr - 0.5 * x + d * lcap + log_identity
               + exps[idx, deg] * LOG_SCALE_STEP)
    sign = np.where(neg & (m % 2 == 1), -1.0, 1.0)
    if cap < 0:
        sign = sign * np.where(m % 2 == 1, -1.0, 1.0)
    t = (sign * poly * np.exp(log_mag)) * phase
    if not np.all(np.isfinite(t)):
        raise ConvergenceError("analytic amplitude overflowed")
    return t


def t_analytic(n0, n, params):
    """Closed-form amplitude for the transition ``n0 -> n``.

    At ``Lambda = 0`` the result is exactly ``exp(i Phi) delta_{n0 n}``.
    """
    return complex(_analytic_entries(params, [n0], [n])[0])


def probability(n0, n, params):
    """``P_{n0,n} = |t_{n0 n}|^2``."""
    return abs(t_analytic(n0, n, params)) ** 2


def probability_block(params, rows, cols):
    """``P[i, j] = P_{rows[i], cols[j]}`` from the analytic route."""
    t = _analytic_entries(params, np.asarray(rows)[:, None], np.asarray(cols)[None, :])
    return t.real ** 2 + t.imag ** 2


def _chunks(rows, workers):
    k = max(1, min(workers, len(rows)))
    return [c for c in np.array_split(rows, k) if len(c)]


def transition_matrix(params, n0_max, n_max, route=Route.ANALYTIC, workers=1,
                      q_max=None, dim=None):
    """Rows ``n0 = 0..n0_max`` of the transition matrix, columns ``0..n_max``.

    Rows are independent, so ``workers > 1`` splits them across threads; the
    result is bitwise identical for any worker count.
    """
    route = Route(route)
    rows = np.arange(n0_max + 1)
    if route is Route.ORACLE:
        from .oracle import oracle_block
        t = oracle_block(params, rows, n_max, dim=dim)
    else:
        cols = np.arange(n_max + 1)

        def work(chunk):
            if route is Route.ANALYTIC:
                return _analytic_entries(params, chunk[:, None], cols[None, :])
            return _algebraic_rows(params, chunk, n_max, q_max)

        chunks = _chunks(rows, workers)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(work, chunks))
        else:
            parts = [work(c) for c in chunks]
        t = np.vstack(parts)
    return TransitionMatrix(rows=rows, n_max=n_max, t=np.ascontiguousarray(t),
                            lambda_bar=params.lambda_bar,
                            omega_tau=params.omega_tau, route=route)


# -- distributions and observables -----------------------------------------


def _check_tol(tail_tol):
    if not 0.0 < tail_tol < 1.0:
        raise DomainError(f"tail_tol must lie in (0, 1), got {tail_tol!r}")


def _check_propagating(n0, n_hi, e0_ratio):
    # particle ends in k_{n0-n}; k_l^2 = k_0^2 (1 + l / e0_ratio)
    if 1.0 + (n0 - n_hi) / e0_ratio <= 0:
        raise EvanescentModeError(
            f"final photon number {n_hi} leaves the particle evanescent "
            f"(n - n0 >= E0/hbar*omega = {e0_ratio:g})"
        )


def distribution_from(n0, params, tail_tol=1e-12):
    """Final photon-number distribution for the initial Fock state ``|n0>``.

    The window around ``n0 + Lambda^2`` grows until both edges carry
    negligible mass and the unitarity defect ``1 - sum p`` is below
    ``tail_tol``; that defect is reported as ``tail_bound``.
    """
    _check_tol(tail_tol)
    if n0 < 0:
        raise DomainError("n0 must be >= 0")
    cap = abs(params.cap_lambda)
    width = 12 + int(math.ceil(cap * cap + 6.0 * cap * math.sqrt(n0 + cap * cap + 1.0)))
    edge_tol = 1e-3 * tail_tol
    for _ in range(40):
        lo = max(0, n0 - width)
        hi = n0 + width + int(math.ceil(cap * cap))
        _check_propagating(n0, hi, params.e0_ratio)
        p = probability_block(params, [n0], np.arange(lo, hi + 1))[0]
        edges = math.fsum(p[-4:]) + (math.fsum(p[:4]) if lo > 0 else 0.0)
        defect = 1.0 - math.fsum(p)
        if edges < edge_tol:
            if abs(defect) < tail_tol:
                return PhotonDistribution(p=p, tail_bound=max(defect, 0.0), n_min=lo)
            raise TruncationError(
                f"unitarity defect {defect:.3g} exceeds tail_tol={tail_tol:g} with "
                f"negligible edge mass; rounding error dominates at n0={n0}"
            )
        width = int(width * 1.5) + 8
    raise TruncationError(f"no window certified tail_tol={tail_tol:g} for n0={n0}")


def final_energies(n0, params, check=True, tail_tol=1e-12):
    """Particle and field energies after transit, in units of ``hbar omega``.

    Particle: ``E0 - Lambda^2``. Field: ``n0 + Lambda^2 + 1/2``. With
    ``check=True`` the field value is compared against ``sum (n + 1/2) p_n``
    of :func:`distribution_from` and a mismatch above ``1e-8`` raises.
    """
    x = params.cap_lambda ** 2
    if params.e0_ratio <= x:
        raise DomainError(
            f"E0/hbar*omega={params.e0_ratio:g} must exceed Lambda^2={x:g}"
        )
    out = FinalEnergies(particle=params.e0_ratio - x, field=n0 + x + 0.5)
    if check:
        dist = distribution_from(n0, params, tail_tol)
        moment = math.fsum((dist.n + 0.5) * dist.p)
        if abs(moment - out.field) > 1e-8:
            raise ConvergenceError(
                f"field energy moment {moment!r} disagrees with closed form {out.field!r}"
            )
    return out


def asymmetry(n0, q, params):
    """``P_{n0, n0+q} - P_{n0, n0-q}``: positive when gaining ``q`` photons is
    likelier than losing ``q``."""
    if q < 0 or q > n0:
        raise DomainError(f"asymmetry needs 0 <= q <= n0, got q={q}, n0={n0}")
    if q == 0:
        return 0.0
    p = probability_block(params, [n0], [n0 + q, n0 - q])[0]
    return float(p[0] - p[1])


def large_n0_probability(n0, q, params):
    """Asymptotic ``P_{n0, n0 +- q} ~ J_q(2 Lambda sqrt(n0))^2`` for ``n0 >> lambda_bar``.

    Emits :class:`RegimeWarning` when ``n0 < 100 lambda_bar^2``.
    """
    if n0 < 100.0 * params.lambda_bar ** 2:
        warnings.warn(
            f"n0={n0} is not large against lambda_bar={params.lambda_bar:g}; "
            "the Bessel limit may be inaccurate", RegimeWarning, stacklevel=2)
    j = bessel_j(q, 2.0 * params.cap_lambda * math.sqrt(n0))
    return j * j


def entanglement_entropy(n0, params, tail_tol=1e-12):
    """Entanglement entropy (nats) of the transmitted particle-field state.

    The particle states ``|k_{n0-n}>`` are mutually orthogonal, so the Schmidt
    weights are the transition probabilities ``P_{n0,n}`` themselves.
    """
    return distribution_from(n0, params, tail_tol).entropy()
