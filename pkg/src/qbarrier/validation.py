"""Cross-route and invariant checks behind ``qbarrier validate``.

Each check returns a :class:`CheckResult` carrying the largest deviation it
saw and the tolerance it was held to. Nothing here depends on timing or on
thread scheduling, so a report is reproducible byte for byte.
"""

import cmath
import math
from dataclasses import asdict, dataclass

import numpy as np

from .classical import classical_spectrum
from .params import Coherent, ModelParams
from .quantized import (Route, distribution_from, entanglement_entropy,
                        final_energies, probability_block, transition_matrix)
from .specfun import bessel_j
from .states import (classical_limit_spectrum, conditional_distribution,
                     detector_positions, thermal_distribution, thermal_mixture)

LAMBDA_BARS = (0.25, 0.5, 1.0, 2.0)
OMEGA_TAUS = (0.5, 1.0, math.pi, 2.0, 5.0, 2.0 * math.pi)
GRID_MAX = 30


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float
    passed: bool

    def as_dict(self):
        return asdict(self)


def _result(name, dev, tol, strict=False):
    ok = dev < tol if strict else dev <= tol
    return CheckResult(name, float(dev), float(tol), bool(ok))


def _poisson(mean, n):
    return np.array([math.exp(k * math.log(mean) - mean - math.lgamma(k + 1.0)) for k in n])


def check_routes(perturb=0.0):
    """Analytic vs algebraic vs oracle amplitudes on the full grid."""
    d_alg = 0.0
    d_orc = 0.0
    for lam in LAMBDA_BARS:
        for wt in OMEGA_TAUS:
            p = ModelParams(lam, wt)
            ta = transition_matrix(p, GRID_MAX, GRID_MAX, Route.ANALYTIC).t * (1.0 + perturb)
            tb = transition_matrix(p, GRID_MAX, GRID_MAX, Route.ALGEBRAIC).t
            tc = transition_matrix(p, GRID_MAX, GRID_MAX, Route.ORACLE).t
            d_alg = max(d_alg, float(np.max(np.abs(ta - tb))))
            d_orc = max(d_orc, float(np.max(np.abs(ta - tc))))
    return [_result("route_analytic_vs_algebraic", d_alg, 1e-10, strict=True),
            _result("route_analytic_vs_oracle", d_orc, 1e-8, strict=True)]


def check_unitarity_symmetry():
    d_row = 0.0
    d_sym = 0.0
    rows = np.arange(GRID_MAX + 1)
    for lam in LAMBDA_BARS:
        for wt in OMEGA_TAUS:
            p = ModelParams(lam, wt)
            cap = abs(p.cap_lambda)
            n_max = GRID_MAX + int(math.ceil(cap * cap + 12.0 * cap * math.sqrt(GRID_MAX + 1.0))) + 40
            pb = probability_block(p, rows, np.arange(n_max + 1))
            sums = np.array([math.fsum(r) for r in pb])
            d_row = max(d_row, float(np.max(np.abs(sums - 1.0))))
            sq = pb[:, : GRID_MAX + 1]
            d_sym = max(d_sym, float(np.max(np.abs(sq - sq.T))))
    return [_result("row_unitarity", d_row, 1e-10),
            _result("probability_symmetry", d_sym, 1e-12)]


def check_vacuum_law():
    dev = 0.0
    for cap in (0.5, 1.0, 2.0):
        d = distribution_from(0, ModelParams.from_cap_lambda(cap))
        dev = max(dev, float(np.max(np.abs(d.p - _poisson(cap * cap, d.n)))))
    return [_result("vacuum_poisson_law", dev, 1e-12)]


def check_energy():
    dev = 0.0
    conserved = 0.0
    for cap in (0.0, 0.5, 1.0, 2.0):
        p = ModelParams.from_cap_lambda(cap, e0_ratio=100.0)
        for n0 in range(GRID_MAX + 1):
            d = distribution_from(n0, p)
            shift = math.fsum((d.n - n0) * d.p)
            dev = max(dev, abs(shift - cap * cap))
            e = final_energies(n0, p, check=False)
            conserved = max(conserved, abs(e.particle + e.field - (p.e0_ratio + n0 + 0.5)))
    return [_result("mean_photon_gain", dev, 1e-8),
            _result("energy_conservation", conserved, 0.0)]


def check_classical_mean():
    dev = 0.0
    for v in (0.5, 1.0, 3.0, 10.0):
        for wt in (0.5, 1.0, math.pi, 5.0):
            dev = max(dev, abs(classical_spectrum(ModelParams(v, wt, phi=0.3)).mean_order()))
    return [_result("classical_mean_order", dev, 1e-12)]


def check_large_n0():
    n0 = 10_000
    cap = 0.25
    p = ModelParams.from_cap_lambda(cap)
    q = np.arange(6)
    pb = probability_block(p, [n0], np.concatenate([n0 + q, n0 - q]))[0]
    up, down = pb[:6], pb[6:]
    j2 = np.array([bessel_j(int(k), 2.0 * cap * math.sqrt(n0)) ** 2 for k in q])
    dev = max(float(np.max(np.abs(up - j2))), float(np.max(np.abs(down - j2))))
    return [_result("large_n0_bessel_limit", dev, 1e-3, strict=True),
            _result("large_n0_symmetry", float(np.max(np.abs(up - down))), 1e-3, strict=True)]


def check_classical_limit():
    phi_alpha = 0.4
    wt = 1.3
    p = ModelParams.from_cap_lambda(0.1, omega_tau=wt)
    lim = classical_limit_spectrum(p, Coherent(100.0, phi_alpha))
    ref = classical_spectrum(ModelParams(p.lambda_bar * 100.0, wt, phi=-phi_alpha))
    if lim.n_min != ref.n_min or lim.n_max != ref.n_max:
        return [_result("classical_limit_spectrum", math.inf, 1e-12)]
    dev = float(np.max(np.abs(lim.amplitudes - ref.amplitudes)))
    return [_result("classical_limit_spectrum", dev, 1e-12)]


def check_thermal():
    y = math.exp(-0.1)
    dev = 0.0
    for cap in (0.5, 1.0, 2.0):
        p = ModelParams.from_cap_lambda(cap)
        th = thermal_distribution(p, y)
        mx = thermal_mixture(p, y, n_max=th.n_max)
        dev = max(dev, float(np.max(np.abs(th.dense(th.n_max) - mx.dense(th.n_max)))))
    return [_result("thermal_closed_form_vs_mixture", dev, 1e-8)]


def check_resonance():
    p = ModelParams(1.0, 2.0 * math.pi)
    t = transition_matrix(p, GRID_MAX, GRID_MAX).t
    off = float(np.max(np.abs(t - np.diag(np.diag(t)))))
    ph = max(abs(math.remainder(cmath.phase(v) - 2.0 * math.pi, 2.0 * math.pi))
             for v in np.diag(t))
    mod = float(np.max(np.abs(np.abs(np.diag(t)) - 1.0)))
    c0 = classical_spectrum(p)
    cls = abs(abs(c0.amplitude(0)) - 1.0) + math.fsum(c0.probabilities) - c0.probability(0)
    return [_result("resonance_off_diagonal", off, 0.0),
            _result("resonance_phase", ph, 1e-12),
            _result("resonance_modulus", mod, 1e-12),
            _result("resonance_classical_passage", cls, 0.0)]


def check_detector():
    p = ModelParams.from_cap_lambda(1.0)
    st = Coherent(3.0, 0.0)
    x_plus, x_minus = detector_positions(p, st)
    a = conditional_distribution(p, st, x_plus)
    b = conditional_distribution(p, st, x_minus)
    dev = max(float(np.max(np.abs(a.p - _poisson(16.0, a.n)))),
              float(np.max(np.abs(b.p - _poisson(4.0, b.n)))))
    top = max(a.n_max, b.n_max)
    overlap = math.fsum(np.minimum(a.dense(top), b.dense(top)))
    return [_result("detector_poisson_laws", dev, 1e-12),
            _result("detector_overlap", overlap, 0.05, strict=True)]


def check_entropy():
    s0 = entanglement_entropy(3, ModelParams(1.0, 1.0).with_(lambda_bar=0.0))
    sres = entanglement_entropy(3, ModelParams(1.0, 2.0 * math.pi))
    s1 = entanglement_entropy(0, ModelParams.from_cap_lambda(1.0))
    n = np.arange(40)
    pk = _poisson(1.0, n)
    ref = -math.fsum(pk * np.log(pk))
    return [_result("entropy_product_states", max(abs(s0), abs(sres)), 0.0),
            _result("entropy_vacuum_poisson", abs(s1 - ref), 1e-10)]


CHECKS = (check_routes, check_unitarity_symmetry, check_vacuum_law, check_energy,
          check_classical_mean, check_large_n0, check_classical_limit, check_thermal,
          check_resonance, check_detector, check_entropy)


def run_all(perturb=0.0):
    """Run every check; ``perturb`` scales the analytic amplitudes by
    ``1 + perturb`` in the route check (a negative control)."""
    out = []
    for check in CHECKS:
        out.extend(check(perturb) if check is check_routes else check())
    return out
