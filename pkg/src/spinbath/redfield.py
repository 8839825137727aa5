"""Nonsecular Redfield generator, applied matrix-free, and a fixed-step RK4 propagator.

The generator is stored in the eigenbasis of the system Hamiltonian. With the
Lamb shift dropped, every bath contributes

    d rho / dt  +=  -[S, Lam rho - rho Lam^dag],   Lam_jl = S_jl Gamma(w_l - w_j),

which is the bracketed tensor form of the Redfield equation rewritten as
operator products, so one application costs O(d^3).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg

from .qcore import DensityMatrix, is_hermitian, partial_trace_to_qubit
from .spectral import rate_gamma


class IntegrationError(RuntimeError):
    """Propagation left the physical domain (trace or positivity)."""


class NonUniqueSteadyStateError(RuntimeError):
    pass


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    """Make each eigenvector's largest-magnitude component real and positive."""
    idx = np.argmax(np.abs(vecs), axis=0)
    lead = vecs[idx, np.arange(vecs.shape[1])]
    return vecs * (np.abs(lead) / lead)[None, :]


@dataclass(frozen=True)
class RedfieldGenerator:
    energies: np.ndarray        # ascending eigenvalues of H
    basis: np.ndarray           # columns are eigenvectors
    couplings: tuple            # S^alpha in the eigenbasis
    rates: tuple                # Gamma^alpha(w_l - w_j) indexed [j, l]
    lams: tuple                 # S * rates, the operators Lam^alpha
    bohr: np.ndarray            # w_m - w_n

    @property
    def dim(self) -> int:
        return self.energies.size

    def norm_estimate(self) -> float:
        """Upper bound on the spectral radius of the generator."""
        est = float(np.max(np.abs(self.bohr)))
        for S, lam in zip(self.couplings, self.lams):
            est += 2.0 * np.linalg.norm(S, 2) * np.linalg.norm(lam, 2)
        return est

    def to_eigenbasis(self, op: np.ndarray) -> np.ndarray:
        return self.basis.conj().T @ op @ self.basis

    def from_eigenbasis(self, op: np.ndarray) -> np.ndarray:
        return self.basis @ op @ self.basis.conj().T

    def apply_eig(self, rho: np.ndarray) -> np.ndarray:
        out = -1j * self.bohr * rho
        for S, lam in zip(self.couplings, self.lams):
            X = lam @ rho - rho @ lam.conj().T
            out -= S @ X - X @ S
        return out

    def apply_eig_hermitian(self, rho: np.ndarray) -> np.ndarray:
        """Same as ``apply_eig`` for Hermitian ``rho``, with half the products."""
        out = -1j * self.bohr * rho
        for S, lam in zip(self.couplings, self.lams):
            A = lam @ rho
            X = A - A.conj().T
            B = S @ X
            # X is anti-Hermitian, so X S = -(S X)^dag
            out -= B + B.conj().T
        return out


def build_generator(H: np.ndarray, couplings: Sequence[tuple], degeneracy_tol: float = 1e-10
                    ) -> RedfieldGenerator:
    """Redfield generator for ``H`` and a list of ``(S, J, T)`` bath couplings."""
    H = np.asarray(H, dtype=complex)
    if not is_hermitian(H):
        raise ValueError("Hamiltonian is not Hermitian")
    energies, vecs = np.linalg.eigh(H)
    vecs = _fix_phases(vecs)
    bohr = energies[:, None] - energies[None, :]
    # degenerate pairs share the exact zero-frequency entry
    freqs = np.where(np.abs(bohr) < degeneracy_tol, 0.0, bohr)
    # rates[j, l] = Gamma(w_l - w_j) = Gamma(-freqs[j, l])
    Ss, Gs, Ls = [], [], []
    for S, J, T in couplings:
        S = np.asarray(S, dtype=complex)
        if S.shape != H.shape:
            raise ValueError(f"coupling shape {S.shape} differs from Hamiltonian {H.shape}")
        if not is_hermitian(S):
            raise ValueError("coupling operator is not Hermitian")
        Se = vecs.conj().T @ S @ vecs
        G = rate_gamma(J, -freqs, T).reshape(freqs.shape)
        for arr in (Se, G):
            arr.setflags(write=False)
        Ss.append(Se)
        Gs.append(G)
        Ls.append(Se * G)
    return RedfieldGenerator(energies, vecs, tuple(Ss), tuple(Gs), tuple(Ls), bohr)


def apply_generator(G: RedfieldGenerator, rho: np.ndarray) -> np.ndarray:
    """d rho / dt for ``rho`` given in the original (non-eigen) basis."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (G.dim, G.dim):
        raise ValueError(f"state shape {rho.shape} does not match generator dimension {G.dim}")
    return G.from_eigenbasis(G.apply_eig(G.to_eigenbasis(rho)))


@dataclass
class Trajectory:
    """Reduced qubit states sampled on a time grid.

    ``rho12`` is the coherence <down|rho|up> between the lower (sigma_z = -1)
    and upper qubit levels, i.e. rho_12 with level 1 the ground state when
    Delta > 0.
    """

    times: np.ndarray
    states: np.ndarray                     # (n, 2, 2) in the (up, down) basis
    trace_err: np.ndarray
    herm_err: np.ndarray = field(default=None)
    min_eig: np.ndarray = field(default=None)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=complex)
        if self.states.shape != (self.times.size, 2, 2):
            raise ValueError("one 2x2 state per time is required")
        if self.times.size > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        n = self.times.size
        if self.herm_err is None:
            self.herm_err = np.abs(self.states - self.states.conj().transpose(0, 2, 1)).max(axis=(1, 2))
        if self.min_eig is None:
            self.min_eig = np.full(n, np.nan)

    @property
    def rho12(self) -> np.ndarray:
        return self.states[:, 1, 0]

    @property
    def rho11(self) -> np.ndarray:
        return self.states[:, 1, 1].real

    @property
    def sx(self) -> np.ndarray:
        return (self.states[:, 0, 1] + self.states[:, 1, 0]).real

    @property
    def sz(self) -> np.ndarray:
        return (self.states[:, 0, 0] - self.states[:, 1, 1]).real

    def columns(self) -> dict:
        return {
            "t": self.times,
            "re_rho12": self.rho12.real,
            "im_rho12": self.rho12.imag,
            "sx": self.sx,
            "sz": self.sz,
            "trace_err": self.trace_err,
        }


def default_step(G: RedfieldGenerator, delta: float = 1.0) -> float:
    """min(0.01/Delta, 0.1/||G||)."""
    limits = [0.1 / G.norm_estimate()]
    if delta > 0:
        limits.append(0.01 / delta)
    return min(limits)


def _rk4(f, y, h, n):
    for _ in range(n):
        k1 = f(y)
        k2 = f(y + (0.5 * h) * k1)
        k3 = f(y + (0.5 * h) * k2)
        k4 = f(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


def propagate(G: RedfieldGenerator, rho0, times, h: float | None = None, delta: float = 1.0,
              trace_tol: float = 1e-6, pos_tol: float = -1e-4) -> Trajectory:
    """Integrate the master equation with fixed-step RK4 and reduce to the qubit.

    Output times are hit exactly: each interval is split into
    ``ceil(dt / h)`` equal substeps. A generator with no dissipative part is
    propagated with exact phases instead.
    """
    if isinstance(rho0, DensityMatrix):
        dims = rho0.dims
        mat = rho0.matrix
    else:
        mat = np.asarray(rho0, dtype=complex)
        dims = (mat.shape[0],)
    times = np.asarray(times, dtype=float)
    if times.size == 0 or times[0] != 0.0:
        raise ValueError("time grid must start at 0")
    if h is None:
        h = default_step(G, delta)
    if dims[0] != 2:
        raise ValueError("leading subsystem must be a qubit")
    n = times.size
    states = np.empty((n, 2, 2), dtype=complex)
    trace_err = np.empty(n)
    herm_err = np.empty(n)
    min_eig = np.empty(n)

    y = G.to_eigenbasis(mat)
    rhs = G.apply_eig_hermitian if is_hermitian(mat) else G.apply_eig
    # without dissipators the generator is diagonal here and is integrated exactly
    unitary = all(not np.any(lam) for lam in G.lams)
    y0 = y
    for k, t in enumerate(times):
        if k > 0:
            if unitary:
                y = np.exp(-1j * G.bohr * t) * y0
            else:
                dt = t - times[k - 1]
                nsub = max(1, math.ceil(dt / h - 1e-9))
                y = _rk4(rhs, y, dt / nsub, nsub)
        # trace and spectrum are basis independent
        trace_err[k] = abs(np.trace(y) - 1.0)
        herm_err[k] = np.max(np.abs(y - y.conj().T))
        min_eig[k] = np.linalg.eigvalsh(0.5 * (y + y.conj().T))[0]
        states[k] = partial_trace_to_qubit(G.from_eigenbasis(y), dims).matrix
        if trace_err[k] > trace_tol:
            raise IntegrationError(f"trace error {trace_err[k]:.3e} at t = {t}")
        # the extended state may go slightly negative; guard the reduced one
        qubit_min = np.linalg.eigvalsh(0.5 * (states[k] + states[k].conj().T))[0]
        if qubit_min < pos_tol:
            raise IntegrationError(f"positivity violated ({qubit_min:.3e}) at t = {t}")
    return Trajectory(times, states, trace_err, herm_err, min_eig)


def superoperator(G: RedfieldGenerator) -> np.ndarray:
    """Dense d^2 x d^2 matrix of the generator in the eigenbasis (row-major vec)."""
    d = G.dim
    basis = np.eye(d * d, dtype=complex).reshape(d * d, d, d)
    cols = G.apply_eig(basis)
    return cols.reshape(d * d, d * d).T


def steady_state(G: RedfieldGenerator, dims: Sequence[int] | None = None,
                 residual_tol: float = 1e-8, unique_tol: float = 1e-6) -> DensityMatrix:
    """Stationary state reached from the lowest and highest energy eigenstates.

    Both are propagated to t = 50 / (slowest nonzero relaxation rate) with the
    exact exponential of the dense generator; they must coincide.
    """
    d = G.dim
    dims = tuple(dims) if dims is not None else (d,)
    L = superoperator(G)
    ev = np.linalg.eigvals(L)
    rates = -ev.real
    scale = max(1.0, float(np.max(np.abs(ev))))
    decaying = rates[rates > 1e-10 * scale]
    if decaying.size == 0:
        raise NonUniqueSteadyStateError("generator has no relaxing modes")
    t_final = 50.0 / decaying.min()
    prop = linalg.expm(L * t_final)
    finals = []
    for idx in (0, d - 1):
        start = np.zeros((d, d), dtype=complex)
        start[idx, idx] = 1.0
        finals.append((prop @ start.ravel()).reshape(d, d))
    if np.max(np.abs(finals[0] - finals[1])) > unique_tol:
        raise NonUniqueSteadyStateError("stationary state depends on the initial state")
    rho = 0.5 * (finals[0] + finals[0].conj().T)
    rho /= np.trace(rho)
    resid = np.max(np.abs(G.apply_eig(rho)))
    if resid > residual_tol:
        raise IntegrationError(f"stationary residual {resid:.3e} exceeds {residual_tol}")
    return DensityMatrix(G.from_eigenbasis(rho), dims).validate()
