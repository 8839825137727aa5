import math

import numpy as np
import pytest

from spinbath.rcmap import ModelConfig
from spinbath.spectral import BathSpec

OMEGA = 8.0
GAMMA = 0.05 / math.pi


def xz_model(eps_x, eps_z, T=1.0, delta=1.0, eps_y=None):
    baths = [BathSpec("x", eps_x * OMEGA, OMEGA, GAMMA, T),
             BathSpec("z", eps_z * OMEGA, OMEGA, GAMMA, T)]
    if eps_y is not None:
        baths.append(BathSpec("y", eps_y * OMEGA, OMEGA, GAMMA, T))
    return ModelConfig(delta, 0.0, tuple(baths))


def random_density(rng, d):
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = A @ A.conj().T
    return rho / np.trace(rho)


def random_hermitian(rng, d):
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return A + A.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, printed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
