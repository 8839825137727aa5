import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinbath.oracle import (
    DephasingKernel, dephasing_gamma, dephasing_sigma_x, dephasing_trajectory,
)
from spinbath.spectral import BathSpec

from conftest import GAMMA


def kernel(lam=8.0, T=0.1, **kw):
    return DephasingKernel(BathSpec("z", lam, 8.0, GAMMA, T), **kw)


def trapezoid_gamma(k, t, upper=2000.0, n=100_001):
    """Fixed-grid reference; the neglected tail is below 8 g O^2 l^2 / upper^4."""
    w = np.linspace(0.0, upper, n)
    return -np.trapezoid(k.integrand(w, t), w)


def test_gamma_at_zero():
    assert dephasing_gamma(kernel(), 0.0) == 0.0
    assert dephasing_sigma_x(kernel(), 0.0) == 1.0


def test_small_time_expansion():
    k = kernel(lam=2.0, T=1.0)
    from scipy import integrate
    J = k.spectral
    second, _ = integrate.quad(lambda w: J(w) / math.tanh(w / 2.0), 0, np.inf, limit=500)
    t = 1e-3
    assert np.isclose(dephasing_gamma(k, t), -2 * t**2 * second, rtol=1e-4)


@pytest.mark.parametrize("t", [0.3, 1.0, 2.7, 5.0])
def test_dual_quadrature(t):
    k = kernel()
    tail = 8 * GAMMA * 64 * 64 / 2000.0**4
    assert tail < 1e-9
    assert abs(dephasing_gamma(k, t) - trapezoid_gamma(k, t)) < 1e-7


def test_zeros_of_sigma_x():
    k = kernel()
    for j in range(4):
        t = math.pi * (2 * j + 1) / 4
        assert abs(dephasing_sigma_x(k, t)) < 1e-15


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 8.0))
def test_gamma_nonpositive_and_bounded(t):
    k = kernel(lam=4.0, T=0.5)
    g = dephasing_gamma(k, t)
    assert g <= 0
    assert abs(dephasing_sigma_x(k, t)) <= 1


def test_envelope_monotone_at_bath_periods():
    k = kernel()
    period = 2 * math.pi / 8.0
    env = [dephasing_gamma(k, n * period) for n in range(1, 12)]
    assert np.all(np.diff(env) <= 1e-12)


def test_envelope_monotone_for_ohmic_like():
    from spinbath.spectral import SpectralDensity
    k = DephasingKernel(BathSpec("z", 1.0, 8.0, GAMMA, 1.0), spectral=SpectralDensity.ohmic(0.1, 5.0))
    g = [dephasing_gamma(k, t) for t in np.linspace(0, 6, 25)]
    assert np.all(np.diff(g) <= 1e-12)


def test_temperature_monotonicity():
    for t in (0.5, 2.0, 4.0):
        cold = dephasing_gamma(kernel(T=0.1), t)
        hot = dephasing_gamma(kernel(T=1.0), t)
        assert abs(hot) >= abs(cold)


def test_trajectory_uses_exact_envelope():
    k = kernel(T=0.5)
    t = np.linspace(0, 2, 5)
    tr = dephasing_trajectory(k, t)
    expected = [dephasing_sigma_x(k, s) for s in t]
    assert np.allclose(tr.sx, expected, atol=1e-15)
    assert np.allclose(tr.rho12.real, tr.sx / 2)
    assert np.allclose(tr.sz, 0)


def test_kernel_validation():
    with pytest.raises(ValueError):
        DephasingKernel(BathSpec("x", 1.0))
    with pytest.raises(ValueError):
        DephasingKernel(BathSpec("z", 1.0, temperature=0.0))
    with pytest.raises(ValueError):
        dephasing_gamma(kernel(), -1.0)


def test_integrand_finite_at_origin():
    k = kernel()
    assert np.isfinite(k.integrand(0.0, 1.0))
    assert k.integrand(0.0, 1.0) == pytest.approx(4 * (4 * GAMMA * 64 / 64) * (2 * 0.1) * 0.5, rel=1e-14)
