"""Qubit decoherence under strong coupling to multiple bosonic baths.

Reaction-coordinate master equations, effective-Hamiltonian analytics and an
exact pure-dephasing reference.
"""
from .qcore import DensityMatrix, pauli, plus_state
from .spectral import BathSpec, SpectralDensity, rate_gamma
from .rcmap import ModelConfig, simulate_rc_qme
from .redfield import Trajectory, build_generator, propagate, steady_state
from .dressing import DressingSet, dawson, kappa_pair, kappa_triple
from .effh import (
    EffhRates, RateMap, analytic_dynamics, build_effective_model, effh_rates, rate_map,
)

__all__ = [
    "DensityMatrix", "pauli", "plus_state",
    "BathSpec", "SpectralDensity", "rate_gamma",
    "ModelConfig", "simulate_rc_qme",
    "Trajectory", "build_generator", "propagate", "steady_state",
    "DressingSet", "dawson", "kappa_pair", "kappa_triple",
    "EffhRates", "RateMap", "analytic_dynamics", "build_effective_model", "effh_rates", "rate_map",
]
__version__ = "0.1.0"
