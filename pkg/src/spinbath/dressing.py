"""Dressing functions kappa_alpha of the polaron-averaged Pauli operators.

Each kappa is a Gaussian average over the RC momenta. Writing the rotation
angle as 2*sqrt(2)*r*D, the integrand of a dressed operator is
``1 - 4 r^2 Q sinc^2(sqrt(2) r D)`` where Q collects the couplings transverse
to that operator, so the angular integrands are smooth even when one
coupling vanishes.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .spectral import QuadratureError

R_MAX = 7.0          # exp(-R_MAX^2) r^4 < 1e-18
RADIAL_ORDER = 16
PAIR_TOL = 1e-8
TRIPLE_TOL = 1e-7


def dawson(x):
    """Dawson integral F(x) = exp(-x^2) int_0^x exp(t^2) dt, odd in x."""
    out = special.dawsn(np.asarray(x, dtype=float))
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=None)
def _gauss_legendre(n: int, a: float, b: float):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


@lru_cache(maxsize=None)
def _radial_rule(panels: int, order: int = RADIAL_ORDER):
    """Composite Gauss-Legendre on [0, R_MAX]; the Gaussian tail beyond is negligible."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, R_MAX, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    r = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wr = (half[:, None] * w[None, :]).ravel()
    return r, wr


def _radial_panels(d_max: float) -> int:
    # at least one panel per period of cos(2 sqrt(2) r D)
    periods = 2.0 * np.sqrt(2.0) * d_max * R_MAX / (2.0 * np.pi)
    return max(4, int(np.ceil(periods)))


def _radial_kernel(D2: np.ndarray, power: int, panels: int) -> np.ndarray:
    """int_0^inf 4 r^power exp(-r^2) sinc^2(sqrt(2) r D) dr for each D^2."""
    r, wr = _radial_rule(panels)
    weight = 4.0 * wr * r**power * np.exp(-r * r)
    arg = np.sqrt(2.0 * D2.reshape(-1, 1)) * r[None, :] / np.pi
    return (np.sinc(arg) ** 2 @ weight).reshape(D2.shape)


def _pair_once(ea: float, eb: float, n_ang: int, panels: int) -> np.ndarray:
    theta, w = _gauss_legendre(n_ang, 0.0, np.pi / 2)
    c2, s2 = np.cos(theta) ** 2, np.sin(theta) ** 2
    qa, qb = ea * ea * c2, eb * eb * s2
    K = _radial_kernel(qa + qb, 3, panels)
    pref = 4.0 / np.pi
    h = 1.0 - pref * np.sum(w * qb * K)
    g = 1.0 - pref * np.sum(w * qa * K)
    f = 1.0 - pref * np.sum(w * (qa + qb) * K)
    return np.array([h, f, g])


def pair_dressing(eps_a: float, eps_b: float, tol: float = PAIR_TOL, max_doublings: int = 6):
    """Values and error estimates of (h, f, g) for baths coupled along axes a and b.

    h dresses sigma^a, g dresses sigma^b and f the third Pauli operator.
    The error estimate is the change under doubling every node count.
    """
    if eps_a < 0 or eps_b < 0:
        raise ValueError("couplings must be non-negative")
    n_ang = 32
    panels = _radial_panels(max(eps_a, eps_b))
    prev = _pair_once(eps_a, eps_b, n_ang, panels)
    for _ in range(max_doublings):
        n_ang, panels = 2 * n_ang, 2 * panels
        cur = _pair_once(eps_a, eps_b, n_ang, panels)
        err = np.abs(cur - prev)
        if np.all(err <= tol):
            return cur, err
        prev = cur
    raise QuadratureError(
        f"dressing quadrature did not converge for eps=({eps_a}, {eps_b}); error {err.max():.2e}"
    )


def kappa_pair(eps_a: float, eps_b: float) -> tuple[float, float, float]:
    """(h, f, g) for the two-bath model; for XZ these are (kappa_x, kappa_y, kappa_z)."""
    vals, _ = pair_dressing(eps_a, eps_b)
    return tuple(float(v) for v in vals)


def _sphere_once(e1: float, e2: float, e_axis: float, n_ang: int, panels: int) -> float:
    # polar axis along the dressed operator; t = cos(theta)
    t, wt = _gauss_legendre(n_ang, 0.0, 1.0)
    phi, wp = _gauss_legendre(n_ang, 0.0, np.pi / 2)
    T2 = (t * t)[:, None]
    Q = (1.0 - T2) * (e1 * e1 * np.cos(phi) ** 2 + e2 * e2 * np.sin(phi) ** 2)[None, :]
    K = _radial_kernel(Q + T2 * e_axis * e_axis, 4, panels)
    return 1.0 - 8.0 / np.pi**1.5 * float(wt @ (Q * K) @ wp)


def _sphere_kappa(e1, e2, e_axis, tol, max_doublings=5):
    n_ang = 24
    panels = _radial_panels(max(e1, e2, e_axis))
    prev = _sphere_once(e1, e2, e_axis, n_ang, panels)
    for _ in range(max_doublings):
        n_ang, panels = 2 * n_ang, 2 * panels
        cur = _sphere_once(e1, e2, e_axis, n_ang, panels)
        err = abs(cur - prev)
        if err <= tol:
            return cur, err
        prev = cur
    raise QuadratureError(
        f"dressing quadrature did not converge for eps=({e1}, {e2}, {e_axis}); error {err:.2e}"
    )


@dataclass(frozen=True)
class DressingSet:
    kappa_x: float
    kappa_y: float
    kappa_z: float
    epsilons: tuple          # (eps_x, eps_y, eps_z); absent baths are 0
    errors: tuple            # quadrature error estimate per kappa

    def __getitem__(self, axis: str) -> float:
        return {"x": self.kappa_x, "y": self.kappa_y, "z": self.kappa_z}[axis]


def kappa_triple(eps_x: float, eps_y: float, eps_z: float, tol: float = TRIPLE_TOL) -> DressingSet:
    """Dressing of all three Pauli operators for couplings along x, y and z.

    With a vanishing coupling the cheaper two-bath integrals are used, with
    the axes mapped so that h dresses the first bath's own operator.
    """
    eps = (float(eps_x), float(eps_y), float(eps_z))
    if min(eps) < 0:
        raise ValueError("couplings must be non-negative")
    if eps_y == 0:
        (h, f, g), err = pair_dressing(eps_x, eps_z)
        vals, errs = (h, f, g), tuple(err)
    elif eps_x == 0:
        (h, f, g), err = pair_dressing(eps_y, eps_z)
        vals, errs = (f, h, g), (err[1], err[0], err[2])
    elif eps_z == 0:
        (h, f, g), err = pair_dressing(eps_x, eps_y)
        vals, errs = (h, g, f), (err[0], err[2], err[1])
    else:
        kx, ex = _sphere_kappa(eps_y, eps_z, eps_x, tol)
        ky, ey = _sphere_kappa(eps_x, eps_z, eps_y, tol)
        kz, ez = _sphere_kappa(eps_x, eps_y, eps_z, tol)
        vals, errs = (kx, ky, kz), (ex, ey, ez)
    return DressingSet(*(float(v) for v in vals), eps, tuple(float(e) for e in errs))
