"""qbarrier: photon exchange between a particle and a quantized field at a
harmonically driven rectangular barrier.

Submodules
----------
specfun     log-factorials, Laguerre and Bessel functions
classical   Bessel sidebands for a classical drive
quantized   transition amplitudes, distributions and observables
states      vacuum, thermal and coherent inputs
oracle      brute-force truncated Fock-space route
cli         the ``qbarrier`` command
"""

from ._backend import BACKEND
from .classical import SidebandSpectrum, beta_eta, classical_spectrum
from .errors import (ConvergenceError, DegenerateError, DomainError,
                     EvanescentModeError, QBarrierError, RegimeError,
                     RegimeWarning, TruncationError)
from .params import Coherent, FieldStateSpec, Fock, ModelParams, Thermal
from .quantized import (PhotonDistribution, Route, TransitionMatrix, asymmetry,
                        displacement_element, distribution_from,
                        entanglement_entropy, final_energies,
                        large_n0_probability, probability, t_algebraic,
                        t_analytic, transition_matrix)
from .specfun import EvalReport, bessel_j, laguerre, log_factorial
from .states import (CoherentLabel, classical_limit_spectrum,
                     coherent_field_purity, coherent_output_label,
                     detector_correlation, phi_lambda, thermal_distribution,
                     vacuum_distribution)
from .oracle import t_oracle

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ModelParams", "Fock", "Thermal", "Coherent", "FieldStateSpec",
    "EvalReport", "log_factorial", "laguerre", "bessel_j",
    "SidebandSpectrum", "beta_eta", "classical_spectrum",
    "Route", "TransitionMatrix", "PhotonDistribution", "displacement_element",
    "t_algebraic", "t_analytic", "t_oracle", "transition_matrix", "probability",
    "distribution_from", "final_energies", "asymmetry", "large_n0_probability",
    "entanglement_entropy",
    "CoherentLabel", "vacuum_distribution", "thermal_distribution", "phi_lambda",
    "coherent_output_label", "detector_correlation", "coherent_field_purity",
    "classical_limit_spectrum",
    "QBarrierError", "DomainError", "TruncationError", "ConvergenceError",
    "EvanescentModeError", "RegimeError", "DegenerateError", "RegimeWarning",
]
