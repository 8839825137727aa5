import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import linalg

from spinbath.effh import (
    EffhRates, RateMap, analytic_dynamics, build_effective_model, effh_rates, rate_map,
    simulate_effh_qme, with_epsilons,
)
from spinbath.qcore import pauli, plus_state
from spinbath.rcmap import ModelConfig
from spinbath.spectral import BathSpec

from conftest import GAMMA, OMEGA, random_density, xz_model


def test_gamma_d_definitions():
    r = effh_rates(xz_model(0.7, 0.4))
    assert r.gamma_d == r.gamma_x_eff / 2 + r.gamma_z_eff
    assert r.relaxation == r.gamma_x_eff
    assert r.gamma_y_eff == 0
    r3 = effh_rates(xz_model(0.7, 0.4, eps_y=0.3))
    assert r3.gamma_d == (r3.gamma_x_eff + r3.gamma_y_eff + 2 * r3.gamma_z_eff) / 2
    assert r3.relaxation == r3.gamma_x_eff + r3.gamma_y_eff
    assert min(r3.gamma_x_eff, r3.gamma_y_eff, r3.gamma_z_eff) > 0


def test_theta_characteristic_equation():
    r = effh_rates(xz_model(1.5, 0.2, T=3.0))
    lhs = 4 * r.theta**2
    rhs = -(r.gamma_x_eff - r.gamma_y_eff) ** 2 + 4 * r.omega21**2
    assert abs(lhs - rhs) < 1e-12


def test_rates_formulas():
    T, ex, ez = 0.7, 0.6, 0.9
    r = effh_rates(xz_model(ex, ez, T=T))
    ds = r.dressing
    w = 2 * ds.kappa_z
    J = 4 * ex**2 * GAMMA * w * np.exp(-w / 1000.0)
    assert np.isclose(r.omega21, w)
    assert np.isclose(r.gamma_x_eff, 2 * np.pi * ds.kappa_x**2 * J / np.tanh(w / (2 * T)), rtol=1e-13)
    assert np.isclose(r.gamma_z_eff, 16 * np.pi * ds.kappa_z**2 * ez**2 * GAMMA * T, rtol=1e-13)


def test_decoupled_z_bath():
    r = effh_rates(xz_model(0.8, 0.0))
    assert r.gamma_z_eff == 0
    assert r.dressing.kappa_x == 1.0
    # bare weak-coupling structure, with the x coupling scale 4 eps^2 gamma
    assert np.isclose(r.omega21, 2 * np.exp(-2 * 0.64))


def test_high_temperature_limit():
    ex, ez = 0.8, 0.6
    r0 = effh_rates(xz_model(ex, ez, T=1.0))
    T = 10 * r0.dressing.kappa_z
    for scale in (1, 3):
        r = effh_rates(xz_model(ex, ez, T=scale * T))
        approx = 16 * np.pi * r.dressing.kappa_x**2 * ex**2 * GAMMA * scale * T
        assert abs(r.gamma_x_eff / approx - 1) < 0.02


@pytest.mark.parametrize("T", [0.1, 1.0])
def test_decoherence_suppression_ordering(T):
    gd = lambda ex, ez: effh_rates(xz_model(ex, ez, T=T)).gamma_d
    assert gd(1.0, 1.0) < gd(0.0, 1.0)
    assert gd(1.0, 0.1) > gd(0.0, 0.1)


def test_tunneling_rejected_by_closed_forms():
    model = ModelConfig(1.0, 0.2, (BathSpec("x", 1.0),))
    with pytest.raises(ValueError):
        effh_rates(model)


def test_rates_validation():
    with pytest.raises(ValueError):
        EffhRates.from_rates(-1.0, 0.0, 0.0, 1.0)


def _rates(gx, gy, gz, w):
    return EffhRates.from_rates(gx, gy, gz, w)


def test_analytic_initial_value():
    rng = np.random.default_rng(1)
    rho0 = random_density(rng, 2)
    tr = analytic_dynamics(_rates(0.3, 0.1, 0.2, 1.7), 2.0, rho0, [0.0, 1.0])
    assert np.array_equal(tr.states[0], rho0)


def test_analytic_free_precession():
    t = np.linspace(0, 10, 101)
    tr = analytic_dynamics(_rates(0, 0, 0, 2.0), 1.0, plus_state(), t)
    assert np.allclose(tr.rho12, 0.5 * (np.cos(2 * t) + 1j * np.sin(2 * t)), atol=1e-15)


def test_analytic_thermalizes():
    beta, w = 1.7, 1.3
    tr = analytic_dynamics(_rates(0.4, 0.1, 0.2, w), beta, plus_state(), [0.0, 500.0])
    assert abs(tr.rho11[-1] - np.exp(beta * w) / (np.exp(beta * w) + 1)) < 1e-14
    assert abs(tr.rho12[-1]) < 1e-14


def test_analytic_explicit_form():
    gx, gz, w = 0.4, 0.15, 1.6
    r = _rates(gx, 0, gz, w)
    t = np.linspace(0, 8, 81)
    th = np.sqrt(w**2 - gx**2 / 4)
    expected = 0.5 * np.exp(-t * (gx + 2 * gz) / 2) * (
        np.cos(th * t) + gx / (2 * th) * np.sin(th * t) + 1j * w / th * np.sin(th * t))
    tr = analytic_dynamics(r, 1.0, plus_state(), t)
    assert np.max(np.abs(tr.rho12 - expected)) < 1e-14


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 3), st.floats(0, 3), st.floats(0, 1), st.floats(0, 2),
       st.integers(0, 2**31 - 1))
def test_analytic_matches_matrix_exponential(gx, gy, gz, w, seed):
    # covers under-, over- and critically damped coherences
    rng = np.random.default_rng(seed)
    rho0 = random_density(rng, 2)
    r = _rates(gx, gy, gz, w)
    m, d = (gx + gy) / 2 + gz, (gx - gy) / 2
    A = np.array([[-m + d, 1j * w], [1j * w, -m - d]])
    t = np.array([0.0, 0.3, 1.0, 4.0])
    tr = analytic_dynamics(r, 0.8, rho0, t)
    u0, v0 = rho0[1, 0] + rho0[0, 1], rho0[1, 0] - rho0[0, 1]
    for k, tk in enumerate(t):
        u, v = linalg.expm(A * tk) @ [u0, v0]
        assert abs(tr.rho12[k] - (u + v) / 2) < 1e-12
    # Hermiticity and trace
    assert np.max(np.abs(tr.states - tr.states.conj().transpose(0, 2, 1))) < 1e-14
    assert np.max(tr.trace_err) < 1e-14


def test_critical_damping_is_continuous():
    t = np.linspace(0, 5, 11)
    w = 0.5
    exact = analytic_dynamics(_rates(1.0, 0, 0.1, w), 1.0, plus_state(), t).rho12
    for eps in (1e-7, -1e-7):
        near = analytic_dynamics(_rates(1.0 + eps, 0, 0.1, w), 1.0, plus_state(), t).rho12
        assert np.max(np.abs(near - exact)) < 1e-6


def test_effective_model_at_zero_coupling():
    model = ModelConfig(1.0, 0.3, (BathSpec("x", 0.0), BathSpec("z", 0.0)))
    H, couplings = build_effective_model(model)
    assert np.allclose(H, pauli("z") + 0.3 * pauli("x"))
    assert couplings == []


def test_effective_model_structure():
    H, couplings = build_effective_model(xz_model(1.0, 1.0, T=0.5))
    ds = effh_rates(xz_model(1.0, 1.0, T=0.5)).dressing
    assert np.allclose(H, ds.kappa_z * pauli("z"))
    (Sx, Jx, Tx), (Sz, Jz, Tz) = couplings
    assert np.allclose(Sx, ds.kappa_x * pauli("x")) and np.allclose(Sz, ds.kappa_z * pauli("z"))
    assert Jx.kind == "effective-ohmic" and Jx.params == (1.0, GAMMA, 1000.0)
    assert Tx == Tz == 0.5


@pytest.mark.parametrize("ex,ez,T", [(1.0, 1.0, 1.0), (0.4, 0.9, 0.3)])
def test_effh_qme_matches_closed_form(ex, ez, T):
    model = xz_model(ex, ez, T=T)
    t = np.linspace(0, 20, 201)
    num = simulate_effh_qme(model, plus_state(), t)
    ana = analytic_dynamics(effh_rates(model), 1 / T, plus_state(), t)
    assert np.max(np.abs(num.states - ana.states)) < 1e-6


def test_rate_map_single_cell():
    rm = rate_map(xz_model(0.0, 0.0), [0.0], [0.0])
    assert rm["gamma_d"][0, 0] == 0
    assert all(rm[k][0, 0] == 1.0 for k in ("kappa_x", "kappa_y", "kappa_z"))


def test_rate_map_rows_and_trends():
    grid = np.round(np.linspace(0, 1, 11), 10)
    rm = rate_map(xz_model(0.0, 0.0, T=1.0), grid, [0.1, 1.0])
    assert rm["gamma_d"].shape == (2, 11)
    assert np.all(np.diff(rm["gamma_d"][0]) >= 0)
    assert rm["gamma_d"][1, -1] < rm["gamma_d"][1, 0]
    assert np.all(rm["gamma_d"] >= 0)
    rows = list(rm.rows())
    assert len(rows) == 22
    assert rows[0][:2] == (0.0, 0.1) and rows[1][:2] == (0.1, 0.1) and rows[11][:2] == (0.0, 1.0)


def test_rate_map_parallel_matches_serial():
    g = [0.0, 0.5, 1.0]
    a = rate_map(xz_model(0, 0), g, g, jobs=1)
    b = rate_map(xz_model(0, 0), g, g, jobs=2)
    for k in a.values:
        assert np.array_equal(a[k], b[k])


def test_rate_map_validation():
    with pytest.raises(ValueError):
        rate_map(xz_model(0, 0), [], [0.1])
    with pytest.raises(ValueError):
        rate_map(xz_model(0, 0), [0.2, 0.1], [0.1])
    with pytest.raises(ValueError):
        rate_map(ModelConfig(1.0, 0.0, (BathSpec("z", 1.0),)), [0.1], [0.1])
    with pytest.raises(ValueError):
        RateMap(np.zeros(2), np.zeros(1), {k: np.zeros((2, 2)) for k in
                ("gamma_d", "gamma_x_eff", "gamma_z_eff", "kappa_x", "kappa_y", "kappa_z")})


def test_with_epsilons():
    m = with_epsilons(xz_model(0, 0), x=0.5, z=1.5)
    assert m.bath("x").lam == 0.5 * OMEGA and m.bath("z").lam == 1.5 * OMEGA
