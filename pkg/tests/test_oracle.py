import math

import numpy as np
import pytest
from scipy.linalg import expm as scipy_expm

from qbarrier.errors import DomainError
from qbarrier.oracle import (MAX_DIM, build_ladder, displacement_operator, expm,
                             number_operator, t_oracle, unitarity_defect, margin_for)
from qbarrier.params import ModelParams
from qbarrier.quantized import Route, t_analytic, transition_matrix


def test_ladder_commutator():
    a, ad = build_ladder(12)
    comm = a.entries @ ad.entries - ad.entries @ a.entries
    # identity except the truncation corner
    assert np.allclose(comm[:-1, :-1], np.eye(11))
    assert np.array_equal(np.diag(number_operator(12).entries), np.arange(12.0))


def test_expm_matches_scipy():
    rng = np.random.default_rng(7)
    m = rng.normal(size=(20, 20)) + 1j * rng.normal(size=(20, 20))
    got = expm(m).entries
    ref = scipy_expm(m)
    assert np.max(np.abs(got - ref)) < 1e-10 * np.max(np.abs(ref))


def test_displacement_unitary_and_coherent_column():
    lam = 0.9
    d = displacement_operator(lam, 120)
    assert unitarity_defect(d, margin_for(lam)) < 1e-12
    col = d.entries[:30, 0]
    n = np.arange(30)
    ref = np.exp(-lam * lam / 2) * lam ** n / np.sqrt([float(math.factorial(k)) for k in n])
    assert np.max(np.abs(col - ref)) < 1e-13


@pytest.mark.parametrize("lam,wt", [(0.5, 1.0), (2.0, 5.0), (1.0, 2 * math.pi)])
def test_oracle_matches_analytic(lam, wt):
    p = ModelParams(lam, wt)
    to = transition_matrix(p, 20, 20, Route.ORACLE).t
    ta = transition_matrix(p, 20, 20).t
    assert np.max(np.abs(to - ta)) < 1e-8
    assert abs(t_oracle(3, 5, p) - t_analytic(3, 5, p)) < 1e-8


def test_oracle_dimension_limits():
    p = ModelParams(1.0, 1.0)
    with pytest.raises(DomainError):
        t_oracle(0, 0, p, dim=10)
    with pytest.raises(DomainError):
        t_oracle(0, MAX_DIM, p)
    with pytest.raises(DomainError):
        displacement_operator(1.0, MAX_DIM + 1)
