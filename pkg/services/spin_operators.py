"""
Spin operators on qubit registers: Pauli matrices, the exchange operator
P = ½(Id + σ_1·σ_2) and the total spin S² = Σ_{i,j} σ_i·σ_j.

Qubit 1 is the most significant bit of a basis index, so |ijk⟩ sits at
position 4i + 2j + k.
"""

import functools
import itertools
import logging
from typing import Tuple

import numpy as np

from config import Config
from services.affine_forms import affine_det
from services.errors import InputRejectedError, UnsupportedSizeError
from services.numerics import as_vector

logger = logging.getLogger(__name__)

MAX_QUBITS = 10


def pauli_matrices() -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(σ_x, σ_y, σ_z)."""
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return sx, sy, sz


def embed_single(op: np.ndarray, site: int, n: int) -> np.ndarray:
    """``op`` acting on qubit ``site`` of an n-qubit register."""
    factors = [op if k == site else np.eye(2, dtype=complex) for k in range(n)]
    return functools.reduce(np.kron, factors)


def spin_dot(i: int, j: int, n: int) -> np.ndarray:
    """σ_i·σ_j = Σ_α σ_α^(i) σ_α^(j) on n qubits; 3·Id when i = j."""
    total = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for sigma in pauli_matrices():
        total += embed_single(sigma, i, n) @ embed_single(sigma, j, n)
    return total


def exchange_operator() -> np.ndarray:
    """P = ½(I⊗I + Σ_α σ_α⊗σ_α), the swap on C^2 ⊗ C^2."""
    return 0.5 * (np.eye(4, dtype=complex) + spin_dot(0, 1, 2))


def total_spin_operator(n: int = 3) -> np.ndarray:
    """S² = Σ_{i,j=1}^n σ_i·σ_j including the diagonal terms."""
    if not 1 <= n <= MAX_QUBITS:
        raise UnsupportedSizeError(f"Spin operators support 1..{MAX_QUBITS} qubits, got {n}")
    total = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i, j in itertools.product(range(n), repeat=2):
        total += spin_dot(i, j, n)
    return total


def s_squared_expectation(state, tolerance: float = None) -> float:
    """
    ⟨state| S² |state⟩ for a normalized 3-qubit state.

    Args:
        state: 8 complex amplitudes
        tolerance: Allowed deviation of the norm from 1

    Returns:
        Real expectation value; 4s(s+1) on a spin-s multiplet

    Raises:
        InputRejectedError: if the state is not normalized
    """
    tolerance = tolerance if tolerance is not None else Config.tolerance('spin')
    psi = as_vector(state, dim=8, name='state')
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > tolerance:
        logger.debug(f"State norm {norm!r} differs from 1")
        raise InputRejectedError(f"State must be normalized within {tolerance:g}, norm is {norm!r}",
                                 details={'norm': norm})
    value = np.vdot(psi, total_spin_operator(3) @ psi)
    return float(value.real)


def basis_state(bits: str) -> np.ndarray:
    """Computational basis state from a bit string such as '010'."""
    if not bits or any(b not in '01' for b in bits):
        raise InputRejectedError(f"Invalid basis label: {bits!r}")
    vec = np.zeros(2 ** len(bits), dtype=complex)
    vec[int(bits, 2)] = 1.0
    return vec


def affine_slater_state() -> np.ndarray:
    """Amplitudes det(b − a, c − a) with a, b, c running over |0⟩ = (1, 0), |1⟩ = (0, 1)."""
    basis = np.eye(2)
    amplitudes = np.zeros(8, dtype=complex)
    for index, (i, j, k) in enumerate(itertools.product(range(2), repeat=3)):
        amplitudes[index] = affine_det(np.vstack([basis[i], basis[j], basis[k]]))
    return amplitudes
