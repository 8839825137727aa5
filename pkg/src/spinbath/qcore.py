"""Dense operators on the qubit (x) reaction-coordinate Hilbert space.

Subsystem ordering is fixed everywhere: the qubit is slot 0, followed by one
truncated oscillator per active bath in declaration order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

AXES = ("x", "y", "z")

HERMITIAN_TOL = 1e-12

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def check_axis(axis: str) -> str:
    if axis not in _PAULI:
        raise ValueError(f"bath axis must be one of {AXES}, got {axis!r}")
    return axis


def pauli(axis: str) -> np.ndarray:
    """2x2 Pauli matrix; the basis is (|up>, |down>) with sigma_z = diag(1, -1)."""
    return _PAULI[check_axis(axis)].copy()


def annihilation(M: int) -> np.ndarray:
    """Ladder operator truncated to the lowest ``M`` Fock states."""
    if M < 1:
        raise ValueError(f"number of levels must be >= 1, got {M}")
    return np.diag(np.sqrt(np.arange(1, M, dtype=float)), k=1).astype(complex)


def number_operator(M: int) -> np.ndarray:
    return np.diag(np.arange(M, dtype=float)).astype(complex)


def is_hermitian(op: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(op - op.conj().T), initial=0.0) <= tol)


def kron_all(ops: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, ops)


def embed(op: np.ndarray, slot: int, dims: Sequence[int]) -> np.ndarray:
    """Place ``op`` on subsystem ``slot`` with identities elsewhere."""
    op = np.asarray(op, dtype=complex)
    if not 0 <= slot < len(dims):
        raise ValueError(f"slot {slot} out of range for dims {list(dims)}")
    if op.shape != (dims[slot], dims[slot]):
        raise ValueError(
            f"operator shape {op.shape} does not match subsystem dimension {dims[slot]}"
        )
    factors = [np.eye(d, dtype=complex) for d in dims]
    factors[slot] = op
    return kron_all(factors)


@dataclass(frozen=True)
class DensityMatrix:
    """A density matrix together with its subsystem layout."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        src = self.matrix.matrix if isinstance(self.matrix, DensityMatrix) else self.matrix
        mat = np.array(src, dtype=complex)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        d = int(np.prod(self.dims))
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} inconsistent with dims {self.dims}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def validate(self, trace_tol: float = 1e-10, herm_tol: float = 1e-10,
                 pos_tol: float = -1e-8) -> "DensityMatrix":
        tr = np.trace(self.matrix)
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"trace {tr} differs from 1")
        if not is_hermitian(self.matrix, herm_tol):
            raise ValueError("density matrix is not Hermitian")
        emin = np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))[0]
        if emin < pos_tol:
            raise ValueError(f"density matrix has negative eigenvalue {emin:.3e}")
        return self


def thermal_rc_state(omega: float, temperature: float, M: int) -> DensityMatrix:
    """Boltzmann populations of an oscillator, renormalized over ``M`` levels."""
    if omega <= 0:
        raise ValueError(f"oscillator frequency must be positive, got {omega}")
    if temperature < 0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    if M < 1:
        raise ValueError(f"number of levels must be >= 1, got {M}")
    p = np.zeros(M)
    if temperature == 0:
        p[0] = 1.0
    else:
        p = np.exp(-np.arange(M) * (omega / temperature))
        p /= p.sum()
    return DensityMatrix(np.diag(p).astype(complex), (M,))


def partial_trace_to_qubit(rho, dims: Sequence[int] | None = None) -> DensityMatrix:
    """Trace out every subsystem except the leading qubit."""
    if isinstance(rho, DensityMatrix):
        dims, mat = rho.dims, rho.matrix
    else:
        mat = np.asarray(rho)
        if dims is None:
            raise ValueError("dims required for a bare matrix")
    if dims[0] != 2:
        raise ValueError(f"leading subsystem must be the qubit, got dims {list(dims)}")
    rest = int(np.prod(dims[1:])) if len(dims) > 1 else 1
    red = np.einsum("iaja->ij", mat.reshape(2, rest, 2, rest))
    return DensityMatrix(red, (2,))


def expectation(op: np.ndarray, rho) -> complex:
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    if op.shape != mat.shape:
        raise ValueError(f"operator shape {op.shape} does not match state shape {mat.shape}")
    # tr(A B) without forming the product
    return complex(np.einsum("ij,ji->", op, mat))


def plus_state() -> DensityMatrix:
    """Qubit initial state with all four entries equal to 1/2."""
    return DensityMatrix(np.full((2, 2), 0.5, dtype=complex), (2,))
