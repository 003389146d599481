from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np


STRUCTURAL_TOL = 1e-10
BEHAVIOR_TOL = 1e-9

IDENTITY2 = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

for _m in (IDENTITY2, PAULI_X, PAULI_Y, PAULI_Z):
    _m.setflags(write=False)
del _m


def as_matrix(matrix: np.ndarray | Sequence[Sequence[complex]]) -> np.ndarray:
    """Return a read-only complex128 copy of a square or rectangular matrix."""
    array = np.array(matrix, dtype=np.complex128)
    if array.ndim != 2:
        raise ValueError(f"Expected a two dimensional matrix, got shape {array.shape}.")
    array.setflags(write=False)
    return array


def kron(*matrices: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left factor first."""
    if len(matrices) == 0:
        raise ValueError("kron needs at least one matrix.")
    return reduce(np.kron, matrices)


def dagger(matrix: np.ndarray) -> np.ndarray:
    return matrix.conj().T


def hermitian_part(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.conj().T)


def hermiticity_error(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix - matrix.conj().T), initial=0.0))


def is_hermitian(matrix: np.ndarray, tol: float = STRUCTURAL_TOL) -> bool:
    return matrix.shape[0] == matrix.shape[1] and hermiticity_error(matrix) <= tol


def min_eigenvalue(matrix: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian part of ``matrix``."""
    if matrix.shape[0] == 0:
        return 0.0
    return float(np.linalg.eigvalsh(hermitian_part(matrix))[0])


def is_psd(matrix: np.ndarray, tol: float = STRUCTURAL_TOL) -> bool:
    return is_hermitian(matrix, tol) and min_eigenvalue(matrix) >= -tol


def is_unitary(matrix: np.ndarray, tol: float = STRUCTURAL_TOL) -> bool:
    if matrix.shape[0] != matrix.shape[1]:
        return False
    deviation = matrix.conj().T @ matrix - np.eye(matrix.shape[0])
    return float(np.max(np.abs(deviation), initial=0.0)) <= tol


def is_projector(matrix: np.ndarray, tol: float = STRUCTURAL_TOL) -> bool:
    if not is_hermitian(matrix, tol):
        return False
    return bool(np.allclose(matrix @ matrix, matrix, atol=tol, rtol=0))


def operator_norm(matrix: np.ndarray) -> float:
    """Largest singular value."""
    if matrix.size == 0:
        return 0.0
    return float(np.linalg.norm(matrix, ord=2))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def partial_trace_matrix(
    matrix: np.ndarray, dims: Sequence[int], keep: Sequence[int]
) -> np.ndarray:
    """Trace out every subsystem of ``matrix`` that is not listed in ``keep``.

    The matrix acts on the tensor product of spaces of dimensions ``dims``, first factor
    leftmost. The kept subsystems stay in their original order.
    """
    dims = [int(d) for d in dims]
    n = len(dims)
    keep_sorted = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep_sorted):
        raise ValueError(f"Subsystem indices {list(keep)} are out of range for dims {dims}.")
    total = int(np.prod(dims)) if dims else 1
    if matrix.shape != (total, total):
        raise ValueError(f"Matrix of shape {matrix.shape} does not match dims {dims}.")

    tensor = matrix.reshape(dims + dims)
    # einsum labels: rows use letters 0..n-1, columns n..2n-1; traced factors share a label.
    row_labels = list(range(n))
    col_labels = [k if k not in keep_sorted else n + k for k in range(n)]
    out_labels = [k for k in keep_sorted] + [n + k for k in keep_sorted]
    reduced = np.einsum(tensor, row_labels + col_labels, out_labels)
    kept_dim = int(np.prod([dims[k] for k in keep_sorted])) if keep_sorted else 1
    return reduced.reshape(kept_dim, kept_dim)


def pauli_vector() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return PAULI_X, PAULI_Y, PAULI_Z


def bloch_matrix(weight: float, vector: Sequence[float]) -> np.ndarray:
    """Return ½(weight·𝟙 + v·σ) without validation."""
    vx, vy, vz = (float(c) for c in vector)
    return 0.5 * (weight * IDENTITY2 + vx * PAULI_X + vy * PAULI_Y + vz * PAULI_Z)


def bloch_components(matrix: np.ndarray) -> tuple[float, np.ndarray]:
    """Inverse of :func:`bloch_matrix` for a Hermitian 2x2 matrix: returns (weight, v)."""
    if matrix.shape != (2, 2):
        raise ValueError("Bloch components are only defined for 2x2 matrices.")
    weight = float(np.real(np.trace(matrix)))
    vector = np.array(
        [float(np.real(np.trace(matrix @ p))) for p in (PAULI_X, PAULI_Y, PAULI_Z)]
    )
    return weight, vector


def inverse_sqrt_psd(matrix: np.ndarray, eps: float = 0.0) -> np.ndarray:
    """(matrix + eps·𝟙)^(-1/2) for a positive semidefinite Hermitian matrix."""
    values, vectors = np.linalg.eigh(hermitian_part(matrix))
    values = np.clip(values, 0.0, None) + eps
    return (vectors * values ** -0.5) @ vectors.conj().T


def shift_operator(dim: int) -> np.ndarray:
    """Weyl shift X|k⟩ = |k+1 mod dim⟩."""
    return np.roll(np.eye(dim, dtype=np.complex128), 1, axis=0)


def clock_operator(dim: int) -> np.ndarray:
    """Weyl clock Z|k⟩ = ω^k |k⟩ with ω = exp(2πi/dim)."""
    omega = np.exp(2j * np.pi / dim)
    return np.diag(omega ** np.arange(dim)).astype(np.complex128)
