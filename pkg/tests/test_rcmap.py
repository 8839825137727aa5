import numpy as np
import pytest

from spinbath.qcore import (
    annihilation, embed, number_operator, partial_trace_to_qubit, pauli,
    plus_state, thermal_rc_state,
)
from spinbath.rcmap import (
    ModelConfig, build_extended, initial_extended_state, simulate_rc_qme,
)
from spinbath.spectral import BathSpec

from conftest import GAMMA


def test_single_z_bath_structure():
    model = ModelConfig(1.0, 0.0, (BathSpec("z", 8.0, temperature=0.1),))
    ext = build_extended(model, 5)
    assert ext.dims == (2, 5) and ext.hamiltonian.shape == (10, 10)
    a = annihilation(5)
    expected = (np.kron(pauli("z"), np.eye(5)) + np.kron(np.eye(2), 8 * number_operator(5))
                + 8 * np.kron(pauli("z"), a + a.conj().T))
    assert np.allclose(ext.hamiltonian, expected)
    S, J, T = ext.couplings[0]
    assert np.allclose(S, embed(a + a.conj().T, 1, (2, 5)))
    assert J.kind == "ohmic" and J.params == (GAMMA, 1000.0) and T == 0.1


def test_zero_coupling_baths_are_dropped():
    model = ModelConfig(1.0, 0.0, (BathSpec("x", 0.0), BathSpec("z", 8.0)))
    ext = build_extended(model, 5)
    assert ext.dims == (2, 5) and len(ext.couplings) == 1
    assert [b.axis for b in ext.active] == ["z"]


def test_two_baths_dimension():
    model = ModelConfig(1.0, 0.0, (BathSpec("x", 8.0), BathSpec("z", 8.0)))
    ext = build_extended(model, 5)
    assert ext.hamiltonian.shape == (50, 50)
    assert np.allclose(ext.hamiltonian, ext.hamiltonian.conj().T)


def test_tunneling_enters_qubit_part():
    model = ModelConfig(1.0, 0.3, (BathSpec("z", 0.0),))
    ext = build_extended(model, 3)
    assert np.allclose(ext.hamiltonian, pauli("z") + 0.3 * pauli("x"))


def test_model_validation():
    with pytest.raises(ValueError):
        ModelConfig(1.0, 0.0, (BathSpec("x", 1.0), BathSpec("x", 2.0)))
    with pytest.raises(ValueError):
        ModelConfig(1.0, 0.0, ())
    with pytest.raises(ValueError):
        ModelConfig(-1.0, 0.0, (BathSpec("x", 1.0),))
    with pytest.raises(ValueError):
        build_extended(ModelConfig(1.0, 0.0, (BathSpec("x", 1.0),)), 0)
    three = ModelConfig(1.0, 0.0, tuple(BathSpec(a, 1.0) for a in "xyz"))
    assert build_extended(three, 8).hamiltonian.shape == (1024, 1024)
    with pytest.raises(ValueError):
        build_extended(three, 9)


def test_epsilons():
    model = ModelConfig(1.0, 0.0, (BathSpec("x", 4.0), BathSpec("z", 16.0)))
    assert model.epsilons() == {"x": 0.5, "y": 0.0, "z": 2.0}


def test_initial_state():
    model = ModelConfig(1.0, 0.0, (BathSpec("x", 8.0, temperature=0.0),
                                   BathSpec("z", 8.0, temperature=0.0)))
    rho = initial_extended_state(model, 4, plus_state())
    ground = np.zeros((4, 4))
    ground[0, 0] = 1
    assert np.allclose(rho.matrix, np.kron(np.kron(plus_state().matrix, ground), ground))
    assert rho.dims == (2, 4, 4)
    assert abs(np.trace(rho.matrix) - 1) < 1e-14
    warm = ModelConfig(1.0, 0.0, (BathSpec("z", 8.0, temperature=3.0),))
    rho = initial_extended_state(warm, 5, plus_state())
    assert np.max(np.abs(partial_trace_to_qubit(rho).matrix - plus_state().matrix)) < 1e-14
    assert np.allclose(rho.matrix, np.kron(plus_state().matrix, thermal_rc_state(8.0, 3.0, 5).matrix))


def test_free_precession_without_coupling():
    model = ModelConfig(1.0, 0.0, (BathSpec("x", 0.0), BathSpec("z", 0.0)))
    times = np.linspace(0, 10, 201)
    tr = simulate_rc_qme(model, 5, plus_state(), times)
    assert np.max(np.abs(tr.sx - np.cos(2 * times))) < 1e-8


def test_bath_order_independence():
    bx, bz = BathSpec("x", 4.0, temperature=0.5), BathSpec("z", 6.0, temperature=0.5)
    times = np.linspace(0, 3, 31)
    a = simulate_rc_qme(ModelConfig(1.0, 0.0, (bx, bz)), 3, plus_state(), times)
    b = simulate_rc_qme(ModelConfig(1.0, 0.0, (bz, bx)), 3, plus_state(), times)
    assert np.max(np.abs(a.states - b.states)) < 1e-10


def test_rc_trajectory_invariants():
    model = ModelConfig(1.0, 0.0, (BathSpec("x", 8.0, temperature=0.1),
                                   BathSpec("z", 8.0, temperature=0.1)))
    tr = simulate_rc_qme(model, 3, plus_state(), np.linspace(0, 2, 21))
    assert np.max(tr.trace_err) <= 1e-10
    assert np.max(tr.herm_err) <= 1e-10
    assert np.all(np.abs(tr.sx) <= 1 + 1e-6)
