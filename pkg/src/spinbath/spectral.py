"""Bath spectral densities, thermal occupations and the symmetric rate function.

All energies are in units of the qubit splitting Delta (hbar = k_B = 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .qcore import check_axis

DEFAULT_CUTOFF = 1000.0

BROWNIAN = "brownian"
OHMIC = "ohmic"
EFFECTIVE_OHMIC = "effective-ohmic"


def brownian_j(omega, lam, Omega, gamma):
    omega = np.asarray(omega, dtype=float)
    num = 4.0 * gamma * Omega**2 * lam**2 * omega
    den = (omega**2 - Omega**2) ** 2 + (2.0 * np.pi * gamma * Omega * omega) ** 2
    return num / den


def ohmic_j(omega, gamma, cutoff=math.inf):
    omega = np.asarray(omega, dtype=float)
    return gamma * omega * np.exp(-omega / cutoff)


def effective_j(omega, eps, gamma, cutoff=math.inf):
    return (2.0 * eps) ** 2 * ohmic_j(omega, gamma, cutoff)


@dataclass(frozen=True)
class SpectralDensity:
    """One of the three spectral families used by the model.

    ``params`` holds ``(lam, Omega, gamma)`` for Brownian, ``(gamma, cutoff)``
    for Ohmic and ``(eps, gamma, cutoff)`` for the effective Ohmic form.
    """

    kind: str
    params: tuple

    @classmethod
    def brownian(cls, lam, Omega, gamma):
        return cls(BROWNIAN, (float(lam), float(Omega), float(gamma)))

    @classmethod
    def ohmic(cls, gamma, cutoff=DEFAULT_CUTOFF):
        return cls(OHMIC, (float(gamma), float(cutoff)))

    @classmethod
    def effective(cls, eps, gamma, cutoff=DEFAULT_CUTOFF):
        return cls(EFFECTIVE_OHMIC, (float(eps), float(gamma), float(cutoff)))

    def __post_init__(self):
        if self.kind not in (BROWNIAN, OHMIC, EFFECTIVE_OHMIC):
            raise ValueError(f"unknown spectral density kind {self.kind!r}")

    def __call__(self, omega):
        if self.kind == BROWNIAN:
            return brownian_j(omega, *self.params)
        if self.kind == OHMIC:
            return ohmic_j(omega, *self.params)
        return effective_j(omega, *self.params)

    def over_omega(self, omega):
        """J(w)/w, finite at w = 0."""
        omega = np.asarray(omega, dtype=float)
        if self.kind == BROWNIAN:
            lam, Om, g = self.params
            den = (omega**2 - Om**2) ** 2 + (2.0 * np.pi * g * Om * omega) ** 2
            return 4.0 * g * Om**2 * lam**2 / den
        if self.kind == OHMIC:
            g, cut = self.params
            return g * np.exp(-omega / cut)
        eps, g, cut = self.params
        return 4.0 * eps**2 * g * np.exp(-omega / cut)

    def zero_frequency_rate(self, temperature: float) -> float:
        """lim_{w->0} pi J(w) n(w) = pi T J'(0)."""
        return float(np.pi * temperature * self.over_omega(0.0))


def bose_einstein(omega, temperature):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("Bose-Einstein occupation needs omega > 0")
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(omega / temperature)


def rate_gamma(J: SpectralDensity, omega, temperature: float):
    """Symmetric part of the bath correlation function at frequency ``omega``.

    Positive frequencies are emission (n + 1), negative ones absorption (n);
    ``omega == 0`` uses the closed-form limit of each family.
    """
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    omega = np.asarray(omega, dtype=float)
    scalar = omega.ndim == 0
    omega = np.atleast_1d(omega)
    out = np.empty_like(omega)
    w = np.abs(omega)
    pos, neg, zero = omega > 0, omega < 0, omega == 0
    x = w / temperature
    if pos.any():
        out[pos] = np.pi * J(w[pos]) / -np.expm1(-x[pos])
    if neg.any():
        out[neg] = np.pi * J(w[neg]) * np.exp(-x[neg]) / -np.expm1(-x[neg])
    out[zero] = J.zero_frequency_rate(temperature)
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class BathSpec:
    """Physical parameters of one bath coupled along ``axis``."""

    axis: str
    lam: float
    omega: float = 8.0
    gamma: float = 0.05 / math.pi
    temperature: float = 1.0
    cutoff: float = DEFAULT_CUTOFF

    def __post_init__(self):
        check_axis(self.axis)
        if self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if self.omega <= 0:
            raise ValueError(f"RC frequency must be positive, got {self.omega}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.cutoff <= 0:
            raise ValueError(f"cutoff must be positive, got {self.cutoff}")

    @property
    def epsilon(self) -> float:
        return self.lam / self.omega

    def brownian(self) -> SpectralDensity:
        return SpectralDensity.brownian(self.lam, self.omega, self.gamma)

    def residual(self) -> SpectralDensity:
        return SpectralDensity.ohmic(self.gamma, self.cutoff)

    def effective(self) -> SpectralDensity:
        return SpectralDensity.effective(self.epsilon, self.gamma, self.cutoff)


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class RCParameters:
    lam: float
    omega: float
    first_moment: float = field(default=float("nan"))
    third_moment: float = field(default=float("nan"))


def _moments(J: Callable, upper: float, epsabs: float, epsrel: float, points=None):
    opts = dict(epsabs=epsabs, epsrel=epsrel, limit=1000)
    if points is not None:
        opts["points"] = [p for p in points if 0 < p < upper] or None
    m1, _ = integrate.quad(lambda w: w * J(w), 0.0, upper, **opts)
    m3, _ = integrate.quad(lambda w: w**3 * J(w), 0.0, upper, **opts)
    return m1, m3


def rc_parameters(J, upper: float | None = None, epsabs: float = 1e-10,
                  epsrel: float = 1e-8, points=None) -> RCParameters:
    """Reaction-coordinate coupling and frequency from the spectral moments.

    Brownian spectra map exactly onto their own (lambda, Omega) and bypass the
    integrals, whose third moment diverges for that family. ``points`` marks
    features (narrow peaks) the adaptive quadrature must not step over.
    """
    if isinstance(J, SpectralDensity) and J.kind == BROWNIAN:
        lam, Om, _ = J.params
        return RCParameters(lam, Om)
    if upper is None:
        if isinstance(J, SpectralDensity) and math.isfinite(J.params[-1]):
            upper = 60.0 * J.params[-1]
        else:
            raise ValueError("an upper integration limit is required")
    m1, m3 = _moments(J, upper, epsabs, epsrel, points)
    m1b, m3b = _moments(J, 2.0 * upper, epsabs, epsrel, points)
    for a, b in ((m1, m1b), (m3, m3b)):
        if abs(b - a) > 1e-3 * abs(b):
            raise QuadratureError(
                f"spectral moments not converged at upper limit {upper}: {a} vs {b}"
            )
    if m1b <= 0:
        raise ValueError("spectral density has no weight")
    Om = math.sqrt(m3b / m1b)
    return RCParameters(math.sqrt(m1b / Om), Om, m1b, m3b)
