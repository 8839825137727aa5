"""Reaction-coordinate embedding: qubit plus one truncated oscillator per bath."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qcore import (
    DensityMatrix, annihilation, embed, kron_all, number_operator, pauli,
    thermal_rc_state,
)
from .redfield import Trajectory, build_generator, propagate
from .spectral import BathSpec

MAX_DIM = 1024


@dataclass(frozen=True)
class ModelConfig:
    """Qubit splitting ``delta``, tunneling ``tunneling`` and up to three baths."""

    delta: float = 1.0
    tunneling: float = 0.0
    baths: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "baths", tuple(self.baths))
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if not 1 <= len(self.baths) <= 3:
            raise ValueError("a model needs between one and three baths")
        axes = [b.axis for b in self.baths]
        if len(set(axes)) != len(axes):
            raise ValueError(f"bath axes must be distinct, got {axes}")

    def bath(self, axis: str) -> BathSpec | None:
        for b in self.baths:
            if b.axis == axis:
                return b
        return None

    def epsilons(self) -> dict:
        """epsilon per axis, zero for absent baths."""
        eps = {ax: 0.0 for ax in "xyz"}
        for b in self.baths:
            eps[b.axis] = b.epsilon
        return eps

    def qubit_hamiltonian(self) -> np.ndarray:
        return self.delta * pauli("z") + self.tunneling * pauli("x")


@dataclass(frozen=True)
class ExtendedSystem:
    hamiltonian: np.ndarray
    couplings: tuple            # (S, J_RC, T) per active bath
    dims: tuple
    active: tuple               # BathSpec of every bath that received an RC
    levels: int


def build_extended(model: ModelConfig, M: int) -> ExtendedSystem:
    if M < 1:
        raise ValueError(f"number of RC levels must be >= 1, got {M}")
    active = tuple(b for b in model.baths if b.lam > 0)
    dims = (2,) + (M,) * len(active)
    d = int(np.prod(dims))
    if d > MAX_DIM:
        raise ValueError(f"extended dimension {d} exceeds the limit of {MAX_DIM}")
    a = annihilation(M)
    x_rc = a + a.conj().T
    H = embed(model.qubit_hamiltonian(), 0, dims)
    couplings = []
    for slot, b in enumerate(active, start=1):
        H = H + b.omega * embed(number_operator(M), slot, dims)
        sigma = [pauli(b.axis)] + [np.eye(m) for m in dims[1:]]
        sigma[slot] = x_rc
        H = H + b.lam * kron_all(sigma)
        couplings.append((embed(x_rc, slot, dims), b.residual(), b.temperature))
    return ExtendedSystem(H, tuple(couplings), dims, active, M)


def initial_extended_state(model: ModelConfig, M: int, rho_qubit) -> DensityMatrix:
    """Qubit state times thermal RC states for every active bath."""
    if isinstance(rho_qubit, DensityMatrix):
        rho_qubit = rho_qubit.matrix
    rho_qubit = DensityMatrix(rho_qubit, (2,)).validate()
    factors = [rho_qubit.matrix]
    for b in model.baths:
        if b.lam > 0:
            factors.append(thermal_rc_state(b.omega, b.temperature, M).matrix)
    mat = kron_all(factors)
    return DensityMatrix(mat, (2,) + (M,) * (len(factors) - 1))


def simulate_rc_qme(model: ModelConfig, M: int, rho_qubit, times: Sequence[float],
                    h: float | None = None) -> Trajectory:
    ext = build_extended(model, M)
    G = build_generator(ext.hamiltonian, ext.couplings)
    rho0 = initial_extended_state(model, M, rho_qubit)
    return propagate(G, rho0, times, h=h, delta=model.delta)
