"""Brute-force transition amplitudes in a truncated Fock basis.

Nothing here touches Laguerre polynomials, Bessel functions or factorial
ratios: the displacement operator is a dense matrix exponential of
``lam (a^dag - a)`` and the free evolution is a diagonal phase. Agreement
with :mod:`qbarrier.quantized` is therefore evidence, not tautology.
"""

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError, TruncationError

MAX_DIM = 512
CERT_STEP = 16
CERT_TOL = 1e-10
_TAYLOR_NORM = 0.5
_MAX_TERMS = 60


class OperatorKind(str, enum.Enum):
    ANNIHILATION = "annihilation"
    CREATION = "creation"
    NUMBER = "number"
    DISPLACEMENT = "displacement"
    EVOLUTION = "evolution"
    GENERIC = "generic"


@dataclass(frozen=True)
class TruncatedOperator:
    dim: int
    entries: np.ndarray
    kind: OperatorKind

    def __post_init__(self):
        self.entries.setflags(write=False)

    def __matmul__(self, other):
        rhs = other.entries if isinstance(other, TruncatedOperator) else other
        return self.entries @ rhs

    @property
    def H(self):
        return self.entries.conj().T


def _check_dim(dim):
    if dim < 2:
        raise DomainError(f"dim must be >= 2, got {dim}")
    if dim > MAX_DIM:
        raise DomainError(f"dim={dim} exceeds the dense limit {MAX_DIM}")


def build_ladder(dim):
    """Annihilation and creation operators on ``span{|0>, ..., |dim-1>}``."""
    _check_dim(dim)
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    return (TruncatedOperator(dim, a, OperatorKind.ANNIHILATION),
            TruncatedOperator(dim, a.T.copy(), OperatorKind.CREATION))


def number_operator(dim):
    _check_dim(dim)
    return TruncatedOperator(dim, np.diag(np.arange(dim, dtype=float)), OperatorKind.NUMBER)


def expm(matrix, kind=OperatorKind.GENERIC):
    """Dense matrix exponential by Taylor scaling and squaring.

    The argument is scaled by ``2^-s`` until its 1-norm is at most 0.5, the
    Taylor series is summed until the next term is below ``1e-17`` of the
    partial sum (relative to the 1-norm), and the result is squared ``s``
    times. Raises ``ConvergenceError`` if the series fails to converge or
    the result is not finite.
    """
    a = np.asarray(matrix.entries if isinstance(matrix, TruncatedOperator) else matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("expm needs a square matrix")
    if not np.all(np.isfinite(a)):
        raise DomainError("expm needs finite entries")
    dim = a.shape[0]
    norm = float(np.max(np.sum(np.abs(a), axis=0))) if dim else 0.0
    s = 0 if norm <= _TAYLOR_NORM else int(math.ceil(math.log2(norm / _TAYLOR_NORM)))
    b = a / (2.0 ** s)
    result = np.eye(dim, dtype=np.result_type(a, float))
    term = result.copy()
    for k in range(1, _MAX_TERMS):
        term = term @ b / k
        result = result + term
        if np.max(np.sum(np.abs(term), axis=0)) <= 1e-17 * max(1.0, np.max(np.sum(np.abs(result), axis=0))):
            break
    else:
        raise ConvergenceError("Taylor series of expm did not converge")
    for _ in range(s):
        result = result @ result
    if not np.all(np.isfinite(result)):
        raise ConvergenceError("expm produced non-finite entries")
    return TruncatedOperator(dim, result, kind)


@lru_cache(maxsize=64)
def _displacement_cached(lam, dim):
    a, ad = build_ladder(dim)
    gen = lam * (ad.entries - a.entries)
    return expm(gen, OperatorKind.DISPLACEMENT)


def displacement_operator(lam, dim):
    """``D(lam) = exp(lam (a^dag - a))`` truncated to ``dim`` levels (real ``lam``)."""
    _check_dim(dim)
    return _displacement_cached(float(lam), int(dim))


def evolution_operator(omega_tau, dim):
    """``exp(-i omega_tau N)``: diagonal, built from the number operator."""
    _check_dim(dim)
    n = np.arange(dim, dtype=float)
    ang = -omega_tau * n
    return TruncatedOperator(dim, np.diag(np.cos(ang) + 1j * np.sin(ang)),
                             OperatorKind.EVOLUTION)


def margin_for(lambda_bar):
    return int(math.ceil(40.0 * (lambda_bar + 1.0)))


def unitarity_defect(op, margin):
    """``max |D^dag D - 1|`` over the inner ``dim - margin`` block."""
    inner = op.dim - margin
    if inner <= 0:
        raise DomainError("margin leaves no inner block")
    g = op.H @ op.entries
    return float(np.max(np.abs(g[:inner, :inner] - np.eye(inner))))


def _sandwich(params, rows, n_max, dim):
    lam = params.lambda_bar
    wt = params.omega_tau
    d = displacement_operator(lam, dim).entries
    u = evolution_operator(wt, dim).entries.diagonal()
    # <n| D^dag U D |n0> for all n <= n_max and n0 in rows
    s = d[:, : n_max + 1].conj().T @ (u[:, None] * d[:, rows])
    n = np.arange(n_max + 1)
    ang = lam * lam * wt + n * wt
    pref = np.cos(ang) + 1j * np.sin(ang)
    return (pref[:, None] * s).T


def oracle_block(params, rows, n_max, dim=None):
    """Oracle amplitudes ``t[i, n]`` for ``n0 = rows[i]`` and ``n <= n_max``.

    Certified by recomputing at ``dim + 16`` and requiring every entry to
    change by less than ``1e-10``.
    """
    rows = np.asarray(rows, dtype=np.int64)
    top = int(max(rows.max(), n_max))
    margin = margin_for(params.lambda_bar)
    if dim is None:
        dim = top + 1 + margin
    if dim < top + 1 + margin:
        raise DomainError(f"dim={dim} is below max(n0, n) + margin = {top + 1 + margin}")
    if dim + CERT_STEP > MAX_DIM:
        raise DomainError(f"dim={dim} leaves no room for the certificate below {MAX_DIM}")
    t = _sandwich(params, rows, n_max, dim)
    t2 = _sandwich(params, rows, n_max, dim + CERT_STEP)
    change = float(np.max(np.abs(t - t2)))
    if change >= CERT_TOL:
        raise TruncationError(
            f"oracle changed by {change:.3g} between dim={dim} and dim={dim + CERT_STEP}"
        )
    return t


def t_oracle(n0, n, params, dim=None):
    """``exp(i lam^2 wt) exp(i n wt) <n|D^dag(lam) exp(-i wt N) D(lam)|n0>``."""
    if n0 < 0 or n < 0:
        raise DomainError("Fock indices must be >= 0")
    return complex(oracle_block(params, [n0], n, dim=dim)[0, n])
