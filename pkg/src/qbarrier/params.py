"""Dimensionless model parameters and initial field-state descriptions."""

import math
from dataclasses import dataclass, field, replace
from typing import Union

from .errors import DomainError

TWO_PI = 2.0 * math.pi
DEFAULT_E0_RATIO = 1.0e6
_RESONANCE_ULPS = 8


def fold_phase(phi):
    """Fold an angle into ``[0, 2*pi)``."""
    r = math.fmod(phi, TWO_PI)
    if r < 0:
        r += TWO_PI
    return 0.0 if r >= TWO_PI else r


def half_angle_sine(omega_tau):
    """``sin(omega_tau / 2)``, exactly zero at every resonance ``2*pi*l``.

    The angle is reduced by an exact IEEE remainder first, and a residue
    within a few ulp of ``omega_tau`` counts as resonant, so ``2*pi*l``
    entered in floating point gives an exact zero instead of the ``1e-16``
    residue of ``math.sin``.
    """
    r = math.remainder(omega_tau, TWO_PI)
    # 2*pi*l rounds differently from l*fl(2*pi); snap residues of a few ulp
    if abs(r) <= _RESONANCE_ULPS * math.ulp(max(omega_tau, TWO_PI)):
        return 0.0
    turns = round((omega_tau - r) / TWO_PI)
    s = math.sin(0.5 * r)
    return -s if turns % 2 else s


def is_resonant(omega_tau):
    return half_angle_sine(omega_tau) == 0.0


@dataclass(frozen=True)
class ModelParams:
    """Physical configuration in photon-energy units.

    Attributes
    ----------
    lambda_bar : float
        Coupling in units of the photon energy (quantized field), or the
        drive amplitude ``V / hbar omega`` when used for the classical field.
    omega_tau : float
        Transit phase ``omega * tau`` in radians.
    phi : float
        Phase of the classical drive.
    phi_alpha : float
        Phase of a coherent input state.
    e0_ratio : float
        Incident kinetic energy over ``hbar omega``.
    """

    lambda_bar: float
    omega_tau: float
    phi: float = 0.0
    phi_alpha: float = 0.0
    e0_ratio: float = DEFAULT_E0_RATIO

    def __post_init__(self):
        for name in ("lambda_bar", "omega_tau", "phi", "phi_alpha", "e0_ratio"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if self.lambda_bar < 0:
            raise DomainError(f"lambda_bar must be >= 0, got {self.lambda_bar}")
        if self.omega_tau < 0:
            raise DomainError(f"omega_tau must be >= 0, got {self.omega_tau}")
        if self.e0_ratio <= 0:
            raise DomainError(f"e0_ratio must be > 0, got {self.e0_ratio}")

    @property
    def cap_lambda(self):
        """Coupling strength ``2 lambda_bar sin(omega_tau / 2)``.

        Signed: it is negative on ``(2 pi, 4 pi)`` and so on. Every closed
        form downstream accepts the sign.
        """
        return 2.0 * self.lambda_bar * half_angle_sine(self.omega_tau)

    @property
    def resonant(self):
        return is_resonant(self.omega_tau)

    @classmethod
    def from_cap_lambda(cls, cap_lambda, omega_tau=math.pi, **kwargs):
        """Solve ``lambda_bar = Lambda / (2 sin(omega_tau/2))``.

        Resonant transit phases are rejected because every ``lambda_bar``
        maps to ``Lambda = 0`` there.
        """
        s = half_angle_sine(omega_tau)
        if s == 0.0:
            raise DomainError(
                f"omega_tau={omega_tau!r} is resonant; Lambda cannot be set there"
            )
        lam = cap_lambda / (2.0 * s)
        if lam < 0:
            raise DomainError(
                f"Lambda={cap_lambda!r} needs a negative coupling at omega_tau={omega_tau!r}"
            )
        return cls(lambda_bar=lam, omega_tau=omega_tau, **kwargs)

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class Fock:
    """Photon-number eigenstate ``|n0>``."""

    n0: int

    def __post_init__(self):
        if int(self.n0) != self.n0 or self.n0 < 0:
            raise DomainError(f"Fock n0 must be a nonnegative integer, got {self.n0!r}")


@dataclass(frozen=True)
class Thermal:
    """Thermal state with Boltzmann ratio ``y = exp(-hbar omega / k_B T)``."""

    y: float

    def __post_init__(self):
        if not 0.0 <= self.y < 1.0:
            raise DomainError(f"thermal y must lie in [0, 1), got {self.y!r}")

    @classmethod
    def from_temperature(cls, kt_over_hbar_omega):
        if kt_over_hbar_omega <= 0:
            return cls(0.0)
        return cls(math.exp(-1.0 / kt_over_hbar_omega))

    @property
    def mean_photons(self):
        return self.y / (1.0 - self.y)


@dataclass(frozen=True)
class Coherent:
    """Coherent state ``|alpha>`` with ``alpha = alpha_abs * exp(i phi_alpha)``."""

    alpha_abs: float
    phi_alpha: float = field(default=0.0)

    def __post_init__(self):
        if not (math.isfinite(self.alpha_abs) and self.alpha_abs >= 0):
            raise DomainError(f"alpha_abs must be finite and >= 0, got {self.alpha_abs!r}")
        if not math.isfinite(self.phi_alpha):
            raise DomainError("phi_alpha must be finite")
        object.__setattr__(self, "phi_alpha", fold_phase(self.phi_alpha))

    @property
    def alpha(self):
        return complex(self.alpha_abs * math.cos(self.phi_alpha),
                       self.alpha_abs * math.sin(self.phi_alpha))


FieldStateSpec = Union[Fock, Thermal, Coherent]
