"""Exact coherence decay for a qubit coupled to a single sigma_z bath.

    Gamma(t) = -4 int_0^inf J(w) coth(w / 2T) (1 - cos w t) / w^2 dw,
    <sigma_x(t)> = exp(Gamma(t)) cos(2 Delta t)   for rho_12(0) = 1/2.

The integrand is evaluated as (J/w) * (w coth(w/2T)) * (1 - cos w t)/w^2,
three factors that are individually smooth at w = 0.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .qcore import DensityMatrix
from .redfield import Trajectory
from .spectral import BathSpec, QuadratureError, SpectralDensity

ABS_TOL = 1e-9


def w_coth(omega, temperature: float):
    """w coth(w / 2T), with its series 2T + w^2/(6T) below w = 1e-6 T."""
    omega = np.asarray(omega, dtype=float)
    small = np.abs(omega) < 1e-6 * temperature
    safe = np.where(small, 1.0, omega)
    return np.where(small, 2 * temperature + omega**2 / (6 * temperature),
                    safe / np.tanh(safe / (2 * temperature)))


def one_minus_cos_over_w2(omega, t: float):
    """(1 - cos w t) / w^2 = (t^2 / 2) sinc^2(w t / 2)."""
    return 0.5 * t * t * np.sinc(np.asarray(omega) * t / (2 * np.pi)) ** 2


@dataclass(frozen=True)
class DephasingKernel:
    bath: BathSpec
    delta: float = 1.0
    spectral: SpectralDensity | None = None
    split: float = field(default=0.0)      # start of the oscillatory tail treatment

    def __post_init__(self):
        if self.bath.axis != "z":
            raise ValueError("the exact solution needs a sigma_z bath")
        if self.bath.temperature <= 0:
            raise ValueError("the exact solution needs T > 0")
        if self.spectral is None:
            object.__setattr__(self, "spectral", self.bath.brownian())
        if self.split <= 0:
            object.__setattr__(self, "split", 10.0 * self.bath.omega + 20.0 * self.bath.temperature)

    def integrand(self, omega, t: float):
        J, T = self.spectral, self.bath.temperature
        return 4.0 * J.over_omega(omega) * w_coth(omega, T) * one_minus_cos_over_w2(omega, t)

    def scalar_integrand(self, t: float):
        """Pure-Python version of ``integrand`` for the adaptive quadrature."""
        T = self.bath.temperature
        j_over_w = _scalar_over_omega(self.spectral)
        half = 0.5 * t

        def f(w):
            if w < 1e-6 * T:
                wc = 2 * T + w * w / (6 * T)
            else:
                wc = w / math.tanh(w / (2 * T))
            x = w * half
            s = 1.0 if x == 0 else math.sin(x) / x
            return 4.0 * j_over_w(w) * wc * 0.5 * t * t * s * s
        return f


def _scalar_over_omega(J: SpectralDensity):
    if J.kind == "brownian":
        lam, Om, g = J.params
        a, b = 4.0 * g * Om**2 * lam**2, 2.0 * math.pi * g * Om
        def f(w):
            u, v = w * w - Om * Om, b * w
            return a / (u * u + v * v)
        return f
    return lambda w: float(J.over_omega(w))


def dephasing_gamma(k: DephasingKernel, t: float) -> float:
    """Gamma(t) <= 0 to absolute accuracy ~1e-9."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    if t == 0:
        return 0.0
    J, T, W = k.spectral, k.bath.temperature, k.split
    opts = dict(epsabs=1e-11, epsrel=1e-10, limit=2000)
    pieces = []
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            # body: oscillation count t W / 2pi stays moderate for the times of interest
            pieces.append(integrate.quad(k.scalar_integrand(t), 0.0, W,
                                         points=[k.bath.omega], **opts))
            # tail: J coth / w^2 * (1 - cos w t)
            j_over_w = _scalar_over_omega(J)
            smooth = lambda w: 4.0 * j_over_w(w) / (math.tanh(w / (2 * T)) * w)
            if t * W < 1.0:
                # barely oscillating before the tail has decayed
                pieces.append(integrate.quad(
                    lambda w: 2.0 * math.sin(0.5 * w * t) ** 2 * smooth(w), W, np.inf, **opts))
            else:
                # smooth part plus a Fourier integral
                pieces.append(integrate.quad(smooth, W, np.inf, **opts))
                osc = integrate.quad(smooth, W, np.inf, weight="cos", wvar=t,
                                     epsabs=1e-11, limlst=200)
                pieces.append((-osc[0], osc[1]))
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"dephasing integral failed at t = {t}: {exc}") from exc
    value = sum(p[0] for p in pieces)
    err = sum(p[1] for p in pieces)
    if err > ABS_TOL:
        raise QuadratureError(f"dephasing integral error {err:.2e} exceeds {ABS_TOL} at t = {t}")
    return -value


def dephasing_sigma_x(k: DephasingKernel, t: float) -> float:
    return math.exp(dephasing_gamma(k, t)) * math.cos(2.0 * k.delta * t)


def dephasing_trajectory(k: DephasingKernel, times, rho0=None) -> Trajectory:
    """Exact qubit states; populations are conserved and rho_12 precesses at 2 Delta."""
    if rho0 is None:
        rho0 = np.full((2, 2), 0.5, dtype=complex)
    rho0 = DensityMatrix(rho0, (2,)).validate().matrix
    times = np.asarray(times, dtype=float)
    env = np.exp([dephasing_gamma(k, t) for t in times])
    rho12 = rho0[1, 0] * env * np.exp(2j * k.delta * times)
    states = np.empty((times.size, 2, 2), dtype=complex)
    states[:, 0, 0], states[:, 1, 1] = rho0[0, 0], rho0[1, 1]
    states[:, 1, 0], states[:, 0, 1] = rho12, rho12.conj()
    trace_err = np.abs(states[:, 0, 0] + states[:, 1, 1] - 1.0)
    return Trajectory(times, states, trace_err)
