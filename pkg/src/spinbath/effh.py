"""Effective-Hamiltonian (EFFH) treatment: dressed two-level model, closed-form
rates and trajectories, and decoherence-rate maps.

The qubit basis is (|up>, |down>). Level 1 of the closed forms is the ground
state |down> (sigma_z = -1), so rho_12 = state[1, 0] and rho_11 = state[1, 1].
"""
from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import expit

from .dressing import DressingSet, kappa_triple
from .qcore import DensityMatrix, pauli
from .rcmap import ModelConfig
from .redfield import Trajectory, build_generator, propagate
from .spectral import SpectralDensity


def dressing_for(model: ModelConfig) -> DressingSet:
    eps = model.epsilons()
    return kappa_triple(eps["x"], eps["y"], eps["z"])


def _transverse_rate(kappa: float, J: SpectralDensity, omega: float, temperature: float) -> float:
    """2 pi kappa^2 J(w) coth(w / 2T); even in w, with the w -> 0 limit 4 pi kappa^2 T J'(0)."""
    w = abs(omega)
    if temperature == 0:
        return 0.0 if w == 0 else float(2 * np.pi * kappa**2 * J(w))
    if w == 0:
        return float(4 * np.pi * kappa**2 * temperature * J.over_omega(0.0))
    return float(2 * np.pi * kappa**2 * J(w) / np.tanh(w / (2 * temperature)))


@dataclass(frozen=True)
class EffhRates:
    gamma_x_eff: float
    gamma_y_eff: float
    gamma_z_eff: float
    omega21: float
    theta: complex          # 4 theta^2 = -(Gx - Gy)^2 + 4 omega21^2
    gamma_d: float
    relaxation: float
    dressing: DressingSet | None = None

    @classmethod
    def from_rates(cls, gx: float, gy: float, gz: float, omega21: float,
                   dressing: DressingSet | None = None) -> "EffhRates":
        if min(gx, gy, gz) < 0:
            raise ValueError("rates must be non-negative")
        theta = complex(np.sqrt(complex(omega21**2 - 0.25 * (gx - gy) ** 2)))
        gamma_d = (gx + gy) / 2 + gz
        return cls(gx, gy, gz, omega21, theta, gamma_d, gx + gy, dressing)


def effh_rates(model: ModelConfig) -> EffhRates:
    """Closed-form decay rates of the dressed qubit (requires zero tunneling)."""
    if model.tunneling != 0:
        raise ValueError("closed-form EFFH rates assume zero tunneling")
    ds = dressing_for(model)
    omega21 = 2.0 * ds.kappa_z * model.delta
    rates = {}
    for axis in "xy":
        b = model.bath(axis)
        rates[axis] = 0.0 if b is None or b.lam == 0 else _transverse_rate(
            ds[axis], b.effective(), omega21, b.temperature)
    bz = model.bath("z")
    gz = 0.0 if bz is None or bz.lam == 0 else _transverse_rate(
        ds.kappa_z, bz.effective(), 0.0, bz.temperature)
    return EffhRates.from_rates(rates["x"], rates["y"], gz, omega21, ds)


def _propagator_terms(theta2: float, m: float, t: np.ndarray):
    """exp(-m t) cos(theta t) and exp(-m t) sin(theta t)/theta for real theta^2.

    The overdamped branch is written with decaying exponentials only, since
    m >= |theta| there.
    """
    if theta2 > 0:
        th = np.sqrt(theta2)
        damp = np.exp(-m * t)
        return damp * np.cos(th * t), damp * np.sin(th * t) / th
    if theta2 < 0:
        k = np.sqrt(-theta2)
        ep, em = np.exp((k - m) * t), np.exp(-(k + m) * t)
        return 0.5 * (ep + em), 0.5 * (ep - em) / k
    damp = np.exp(-m * t)
    return damp, damp * t


@dataclass(frozen=True)
class AnalyticSolution:
    rates: EffhRates
    beta: float
    rho0: np.ndarray

    def __post_init__(self):
        rho0 = DensityMatrix(self.rho0, (2,)).validate().matrix
        object.__setattr__(self, "rho0", rho0)

    @property
    def p_eq(self) -> float:
        """Equilibrium ground population exp(b w21) / (exp(b w21) + 1)."""
        w = self.rates.omega21
        if w == 0:
            return 0.5
        return float(expit(self.beta * w))

    def states(self, times) -> np.ndarray:
        r = self.rates
        t = np.asarray(times, dtype=float)
        m = 0.5 * (r.gamma_x_eff + r.gamma_y_eff) + r.gamma_z_eff
        delta = 0.5 * (r.gamma_x_eff - r.gamma_y_eff)
        w = r.omega21
        c, s = _propagator_terms(w**2 - delta**2, m, t)
        rho12, rho21 = self.rho0[1, 0], self.rho0[0, 1]
        u0, v0 = rho12 + rho21, rho12 - rho21
        # [u, v]' = (-m + B)[u, v] with B = [[delta, i w], [i w, -delta]]
        u = c * u0 + s * (delta * u0 + 1j * w * v0)
        v = c * v0 + s * (1j * w * u0 - delta * v0)
        p11 = (self.rho0[1, 1].real - self.p_eq) * np.exp(-r.relaxation * t) + self.p_eq
        out = np.empty(t.shape + (2, 2), dtype=complex)
        out[..., 1, 0] = 0.5 * (u + v)
        out[..., 0, 1] = 0.5 * (u - v)
        out[..., 1, 1] = p11
        out[..., 0, 0] = 1.0 - p11
        out[t == 0] = self.rho0
        return out


def analytic_dynamics(rates: EffhRates, beta: float, rho0, times) -> Trajectory:
    if isinstance(rho0, DensityMatrix):
        rho0 = rho0.matrix
    sol = AnalyticSolution(rates, beta, np.asarray(rho0, dtype=complex))
    times = np.asarray(times, dtype=float)
    states = sol.states(times)
    trace_err = np.abs(np.trace(states, axis1=1, axis2=2) - 1.0)
    return Trajectory(times, states, trace_err)


def build_effective_model(model: ModelConfig, dressing: DressingSet | None = None):
    """Dressed Hamiltonian and (S, J_eff, T) couplings for the Redfield solver."""
    ds = dressing if dressing is not None else dressing_for(model)
    H = ds.kappa_z * model.delta * pauli("z") + ds.kappa_x * model.tunneling * pauli("x")
    couplings = [
        (ds[b.axis] * pauli(b.axis), b.effective(), b.temperature)
        for b in model.baths if b.lam > 0
    ]
    return H, couplings


def simulate_effh_qme(model: ModelConfig, rho_qubit, times, h: float | None = None) -> Trajectory:
    H, couplings = build_effective_model(model)
    G = build_generator(H, couplings)
    return propagate(G, DensityMatrix(rho_qubit, (2,)).validate(), times, h=h, delta=model.delta)


def effective_beta(model: ModelConfig) -> float:
    """Inverse temperature of the dissipative baths (all baths if none is dissipative)."""
    temps = {b.temperature for b in model.baths if b.axis != "z" and b.lam > 0}
    if not temps:
        temps = {b.temperature for b in model.baths}
    if len(temps) != 1:
        raise ValueError("closed-form populations need a single bath temperature")
    T = temps.pop()
    return np.inf if T == 0 else 1.0 / T


def simulate_effh_analytic(model: ModelConfig, rho_qubit, times) -> Trajectory:
    return analytic_dynamics(effh_rates(model), effective_beta(model), rho_qubit, times)


RATEMAP_FIELDS = ("gamma_d", "gamma_x_eff", "gamma_z_eff", "kappa_x", "kappa_y", "kappa_z")


@dataclass
class RateMap:
    eps_x: np.ndarray
    eps_z: np.ndarray
    values: dict            # field -> array of shape (len(eps_z), len(eps_x))

    def __post_init__(self):
        shape = (len(self.eps_z), len(self.eps_x))
        for k in RATEMAP_FIELDS:
            if np.shape(self.values[k]) != shape:
                raise ValueError(f"{k} has shape {np.shape(self.values[k])}, expected {shape}")

    def __getitem__(self, key: str) -> np.ndarray:
        return self.values[key]

    def rows(self):
        """(eps_x, eps_z, *fields) with eps_z outer and eps_x inner."""
        for i, ez in enumerate(self.eps_z):
            for j, ex in enumerate(self.eps_x):
                yield (ex, ez) + tuple(self.values[k][i, j] for k in RATEMAP_FIELDS)


def with_epsilons(model: ModelConfig, **eps) -> ModelConfig:
    """Copy of ``model`` with lambda = eps * Omega for the named axes."""
    baths = []
    for b in model.baths:
        if b.axis in eps:
            b = dataclasses.replace(b, lam=float(eps[b.axis]) * b.omega)
        baths.append(b)
    return dataclasses.replace(model, baths=tuple(baths))


def _rate_cell(args):
    model, ex, ez = args
    r = effh_rates(with_epsilons(model, x=ex, z=ez))
    ds = r.dressing
    return (r.gamma_d, r.gamma_x_eff, r.gamma_z_eff, ds.kappa_x, ds.kappa_y, ds.kappa_z)


def rate_map(model: ModelConfig, eps_x: Sequence[float], eps_z: Sequence[float],
             jobs: int = 1) -> RateMap:
    """Effective rates over an (eps_x, eps_z) grid for an XZ model template."""
    if model.bath("x") is None or model.bath("z") is None or model.bath("y") is not None:
        raise ValueError("rate maps need a model with exactly an x and a z bath")
    eps_x = np.asarray(eps_x, dtype=float)
    eps_z = np.asarray(eps_z, dtype=float)
    for g in (eps_x, eps_z):
        if g.ndim != 1 or g.size == 0:
            raise ValueError("grids must be non-empty 1-d sequences")
        if np.any(np.diff(g) <= 0):
            raise ValueError("grids must be strictly ascending")
        if np.any(g < 0):
            raise ValueError("couplings must be non-negative")
    cells = [(model, ex, ez) for ez in eps_z for ex in eps_x]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_rate_cell, cells, chunksize=max(1, len(cells) // (4 * jobs))))
    else:
        results = [_rate_cell(c) for c in cells]
    arr = np.array(results, dtype=float).reshape(eps_z.size, eps_x.size, len(RATEMAP_FIELDS))
    values = {k: arr[..., i] for i, k in enumerate(RATEMAP_FIELDS)}
    return RateMap(eps_x, eps_z, values)
