import math

import numpy as np
import pytest

from oracles import jv
from qbarrier.classical import beta_eta, classical_spectrum, k_ratio, sideband_spectrum
from qbarrier.errors import DomainError, EvanescentModeError
from qbarrier.params import ModelParams


def test_beta_eta_value():
    beta, eta = beta_eta(ModelParams(0.7, 1.0, phi=0.2))
    assert abs(beta - 0.67119575404588420038) < 1e-15
    assert eta == pytest.approx(0.2 + 0.5 + math.pi / 2, abs=1e-15)


def test_j0_squared_at_beta_two():
    s = classical_spectrum(ModelParams(1.0, math.pi))
    assert s.beta == 2.0
    assert abs(s.probability(0) - 0.050127080984469568505) < 1e-15


@pytest.mark.parametrize("v,wt,phi", [(0.5, 1.0, 0.0), (3.0, math.pi, 1.1),
                                      (10.0, 5.0, -0.4), (25.0, 2.0, 3.0)])
def test_spectrum_matches_scipy_and_phase(v, wt, phi):
    s = classical_spectrum(ModelParams(v, wt, phi=phi))
    beta, eta = s.beta, s.eta
    n = s.orders
    ref = jv(n, beta) * np.exp(-1j * n * eta)
    assert np.max(np.abs(s.amplitudes - ref)) < 1e-12
    assert abs(s.total_probability() - 1.0) < 1e-12
    assert abs(s.mean_order()) < 1e-12
    assert s.tail_mass < 1e-12


def test_symmetric_sidebands():
    s = classical_spectrum(ModelParams(4.0, 1.7))
    p = s.probabilities
    assert np.array_equal(p, p[::-1])


def test_resonance_passes_unaltered():
    s = classical_spectrum(ModelParams(2.5, 4.0 * math.pi))
    assert s.beta == 0.0
    assert s.amplitude(0) == 1.0
    assert all(s.amplitude(n) == 0 for n in s.orders if n)


def test_out_of_window_is_zero():
    s = classical_spectrum(ModelParams(1.0, 1.0))
    assert s.amplitude(s.n_max + 1) == 0
    assert s.probability(s.n_min - 1) == 0.0


def test_window_growth_does_not_change_amplitudes():
    a = sideband_spectrum(7.0, 0.3, 1e6, tail_tol=1e-6)
    b = sideband_spectrum(7.0, 0.3, 1e6, tail_tol=1e-15)
    assert b.n_max >= a.n_max
    off = b.n_max - a.n_max
    assert np.array_equal(a.amplitudes, b.amplitudes[off: len(b.amplitudes) - off])


def test_k_ratio_and_evanescence():
    assert np.allclose(k_ratio([-2, 0, 3], 4.0), np.sqrt([0.5, 1.0, 1.75]))
    with pytest.raises(EvanescentModeError):
        classical_spectrum(ModelParams(5.0, math.pi, e0_ratio=3.0))


def test_bad_tail_tol():
    with pytest.raises(DomainError):
        sideband_spectrum(1.0, 0.0, 1e6, tail_tol=0.0)
