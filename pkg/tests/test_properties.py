import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from qbarrier.classical import classical_spectrum
from qbarrier.params import Coherent, ModelParams, fold_phase, half_angle_sine
from qbarrier.quantized import distribution_from, probability_block, t_algebraic, t_analytic
from qbarrier.specfun import bessel_j, laguerre
from qbarrier.states import coherent_output_label, detector_positions

couplings = st.floats(0.0, 2.0)
phases = st.floats(0.0, 4.0 * math.pi)
small_n = st.integers(0, 30)
caps = st.floats(0.05, 2.5)


@settings(max_examples=60, deadline=None)
@given(couplings, phases, small_n, small_n)
def test_analytic_equals_algebraic(lam, wt, n0, n):
    p = ModelParams(lam, wt)
    assert abs(t_analytic(n0, n, p) - t_algebraic(n0, n, p)) < 1e-10


@settings(max_examples=60, deadline=None)
@given(caps, small_n, small_n)
def test_probability_symmetric(cap, n0, n):
    pb = probability_block(ModelParams.from_cap_lambda(cap), [n0, n], [n, n0])
    assert abs(pb[0, 0] - pb[1, 1]) < 1e-12


@settings(max_examples=40, deadline=None)
@given(caps, st.integers(0, 200))
def test_distribution_normalized_and_shifted(cap, n0):
    d = distribution_from(n0, ModelParams.from_cap_lambda(cap))
    assert abs(d.total() - 1.0) < 1e-12
    assert abs(d.mean() - n0 - cap * cap) < 1e-8


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 30.0), phases, st.floats(-3.0, 3.0))
def test_classical_unitary_and_balanced(v, wt, phi):
    s = classical_spectrum(ModelParams(v, wt, phi=phi))
    assert abs(s.total_probability() - 1.0) < 1e-12
    assert abs(s.mean_order()) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(-60, 60), st.floats(-200.0, 200.0))
def test_bessel_reflection(n, x):
    assert bessel_j(-n, x) == (-1) ** (n % 2) * bessel_j(n, x)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 40), st.floats(0.0, 20.0))
def test_laguerre_three_term(n, x):
    # x L_n^{a+1} = (n+a+1) L_n^a - (n+1) L_{n+1}^a, checked at a = 1
    lhs = x * laguerre(n, 2, x)
    rhs = (n + 2) * laguerre(n, 1, x) - (n + 1) * laguerre(n + 1, 1, x)
    scale = max(1.0, abs(lhs), (n + 2) * abs(laguerre(n, 1, x)))
    assert abs(lhs - rhs) <= 1e-9 * scale


@settings(max_examples=100, deadline=None)
@given(st.floats(-1e6, 1e6))
def test_fold_phase_range(phi):
    r = fold_phase(phi)
    assert 0.0 <= r < 2 * math.pi
    assert abs(math.remainder(r - phi, 2 * math.pi)) < 1e-9 * max(1.0, abs(phi))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 40))
def test_resonance_exact_zero(k):
    assert half_angle_sine(2 * math.pi * k) == 0.0


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 1.5), st.floats(0.1, 6.0), st.floats(0.0, 5.0), phases)
def test_detector_extremes(lam, wt, a, phi_a):
    p = ModelParams(lam, wt)
    cap = abs(p.cap_lambda)
    state = Coherent(a, phi_a)
    xp, xm = detector_positions(p, state)
    hi = coherent_output_label(p, state, xp).mean_photons
    lo = coherent_output_label(p, state, xm).mean_photons
    assert np.isclose(hi, (a + cap) ** 2, rtol=1e-12, atol=1e-12)
    assert np.isclose(lo, (a - cap) ** 2, rtol=1e-12, atol=1e-12)
