from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
import math
from typing import Sequence

import numpy as np

from eacomm._errors import InvariantViolation
from eacomm.core_linalg._matrix import as_matrix
from eacomm.core_linalg._matrix import bloch_components
from eacomm.core_linalg._matrix import bloch_matrix
from eacomm.core_linalg._matrix import clock_operator
from eacomm.core_linalg._matrix import hermiticity_error
from eacomm.core_linalg._matrix import kron
from eacomm.core_linalg._matrix import min_eigenvalue
from eacomm.core_linalg._matrix import partial_trace_matrix
from eacomm.core_linalg._matrix import shift_operator
from eacomm.core_linalg._matrix import STRUCTURAL_TOL


@dataclass(frozen=True)
class BlochVector:
    """Real three-vector (x, y, z) paired with the Pauli matrices (X, Y, Z)."""

    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, vector: Sequence[float]) -> BlochVector:
        if len(vector) != 3:
            raise ValueError(f"A Bloch vector has three components, got {len(vector)}.")
        return cls(float(vector[0]), float(vector[1]), float(vector[2]))

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> BlochVector:
        """Unit vector with polar angle ``theta`` and azimuth ``phi``."""
        return cls(
            math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)
        )

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @property
    def norm(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)

    def scaled(self, factor: float) -> BlochVector:
        return BlochVector(factor * self.x, factor * self.y, factor * self.z)


def _check_hermitian_psd(matrix: np.ndarray, what: str, tol: float) -> None:
    herm = hermiticity_error(matrix)
    if herm > tol:
        raise InvariantViolation(f"{what} is not Hermitian", herm)
    lowest = min_eigenvalue(matrix)
    if lowest < -tol:
        raise InvariantViolation(f"{what} is not positive semidefinite", -lowest)


@dataclass(frozen=True, eq=False)
class DensityState:
    """Density matrix on a tensor product of Hilbert spaces of dimensions ``dims``.

    ``dims`` defaults to a single factor spanning the whole matrix.
    """

    matrix: np.ndarray
    dims: tuple[int, ...] = ()
    tol: float = field(default=STRUCTURAL_TOL, compare=False, repr=False)

    def __post_init__(self) -> None:
        matrix = as_matrix(self.matrix)
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"A density matrix must be square, got shape {matrix.shape}.")
        dims = tuple(int(d) for d in self.dims) if self.dims else (matrix.shape[0],)
        if any(d < 1 for d in dims) or math.prod(dims) != matrix.shape[0]:
            raise ValueError(f"dims {dims} do not multiply to the matrix size {matrix.shape[0]}.")
        _check_hermitian_psd(matrix, "Density matrix", self.tol)
        trace_error = abs(np.trace(matrix) - 1.0)
        if trace_error > self.tol:
            raise InvariantViolation("Density matrix trace differs from one", float(trace_error))
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_vector(cls, vector: Sequence[complex], dims: Sequence[int] = ()) -> DensityState:
        """Pure state |ψ⟩⟨ψ| from a state vector, normalized on the way in."""
        psi = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(psi)
        if norm == 0.0:
            raise ValueError("Cannot build a state from the zero vector.")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()), tuple(dims))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def partial_trace(self, keep: Sequence[int]) -> DensityState:
        reduced = partial_trace_matrix(self.matrix, self.dims, keep)
        kept_dims = tuple(self.dims[k] for k in sorted(set(keep)))
        return DensityState(reduced, kept_dims or (1,))

    def tensor(self, other: DensityState) -> DensityState:
        return DensityState(kron(self.matrix, other.matrix), self.dims + other.dims)

    def expectation(self, operator: np.ndarray) -> float:
        return float(np.real(np.trace(self.matrix @ operator)))

    def mix(self, other: DensityState, weight: float) -> DensityState:
        """Return weight·self + (1 − weight)·other."""
        if self.dims != other.dims:
            raise ValueError(f"Cannot mix states with dims {self.dims} and {other.dims}.")
        return DensityState(weight * self.matrix + (1.0 - weight) * other.matrix, self.dims)


def partial_trace(state: DensityState, keep: Sequence[int]) -> DensityState:
    """Reduced state on the subsystems listed in ``keep``."""
    return state.partial_trace(keep)


@dataclass(frozen=True, eq=False)
class Povm:
    """Positive operator valued measure with elements ordered by outcome index."""

    elements: tuple[np.ndarray, ...]
    tol: float = field(default=STRUCTURAL_TOL, compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.elements) == 0:
            raise ValueError("A POVM needs at least one element.")
        elements = tuple(as_matrix(e) for e in self.elements)
        dim = elements[0].shape[0]
        for b, element in enumerate(elements):
            if element.shape != (dim, dim):
                raise ValueError(f"POVM element {b} has shape {element.shape}, expected {dim}.")
            _check_hermitian_psd(element, f"POVM element {b}", self.tol)
        completeness = float(np.max(np.abs(sum(elements) - np.eye(dim))))
        if completeness > self.tol:
            raise InvariantViolation("POVM elements do not sum to the identity", completeness)
        object.__setattr__(self, "elements", elements)

    @property
    def dim(self) -> int:
        return int(self.elements[0].shape[0])

    @property
    def num_outcomes(self) -> int:
        return len(self.elements)

    def probabilities(self, rho: np.ndarray) -> np.ndarray:
        return np.array([np.real(np.trace(rho @ e)) for e in self.elements])

    def is_projective(self, tol: float = STRUCTURAL_TOL) -> bool:
        return all(np.allclose(e @ e, e, atol=tol, rtol=0) for e in self.elements)

    def padded(self, num_outcomes: int) -> Povm:
        """Append zero elements up to ``num_outcomes`` outcomes."""
        if num_outcomes < self.num_outcomes:
            raise ValueError("Cannot pad a POVM to fewer outcomes.")
        zero = np.zeros((self.dim, self.dim), dtype=np.complex128)
        return Povm(self.elements + (zero,) * (num_outcomes - self.num_outcomes))


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive trace preserving map given by Kraus operators in_dim → out_dim."""

    kraus_ops: tuple[np.ndarray, ...]
    tol: float = field(default=STRUCTURAL_TOL, compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.kraus_ops) == 0:
            raise ValueError("A channel needs at least one Kraus operator.")
        ops = tuple(as_matrix(k) for k in self.kraus_ops)
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise ValueError("All Kraus operators must share one shape.")
        gram = sum(k.conj().T @ k for k in ops)
        deviation = float(np.max(np.abs(gram - np.eye(shape[1]))))
        if deviation > self.tol:
            raise InvariantViolation("Kraus operators are not trace preserving", deviation)
        object.__setattr__(self, "kraus_ops", ops)

    @classmethod
    def unitary(cls, unitary: np.ndarray) -> KrausChannel:
        return cls((np.asarray(unitary, dtype=np.complex128),))

    @property
    def in_dim(self) -> int:
        return int(self.kraus_ops[0].shape[1])

    @property
    def out_dim(self) -> int:
        return int(self.kraus_ops[0].shape[0])

    def apply(self, rho: np.ndarray, dims: Sequence[int] = (), subsystem: int = 0) -> np.ndarray:
        """Apply the channel to factor ``subsystem`` of a state on ``dims``.

        Returns the output matrix; the acted-on factor changes dimension to ``out_dim``.
        """
        dims = list(dims) if dims else [rho.shape[0]]
        if dims[subsystem] != self.in_dim:
            raise ValueError(
                f"Channel input dimension {self.in_dim} does not match factor {dims[subsystem]}."
            )
        before = int(np.prod(dims[:subsystem]))
        after = int(np.prod(dims[subsystem + 1 :]))
        output = 0
        for k in self.kraus_ops:
            full = kron(np.eye(before), k, np.eye(after))
            output = output + full @ rho @ full.conj().T
        return np.asarray(output)


def qubit_from_bloch(n: BlochVector) -> DensityState:
    """½(𝟙 + n·σ); fails for |n| > 1."""
    if n.norm > 1.0 + STRUCTURAL_TOL:
        raise InvariantViolation("Bloch vector lies outside the unit ball", n.norm - 1.0)
    return DensityState(bloch_matrix(1.0, n.as_array()))


def povm_element_from_bloch(weight: float, v: BlochVector) -> np.ndarray:
    """½(weight·𝟙 + v·σ); positive semidefinite iff weight ≥ |v|."""
    if weight < v.norm - STRUCTURAL_TOL:
        raise InvariantViolation(
            "POVM element weight is below the Bloch vector norm", v.norm - weight
        )
    return bloch_matrix(weight, v.as_array())


def bloch_from_matrix(matrix: np.ndarray) -> BlochVector:
    """Bloch vector n of a qubit density matrix ½(𝟙 + n·σ)."""
    weight, vector = bloch_components(as_matrix(matrix))
    if abs(weight - 1.0) > STRUCTURAL_TOL:
        raise ValueError(f"A qubit state has unit trace, got {weight}.")
    return BlochVector(*(float(c) for c in vector))


def observable_povm(direction: BlochVector) -> Povm:
    """Projective measurement of d·σ with outcomes ordered (+1, −1)."""
    if abs(direction.norm - 1.0) > STRUCTURAL_TOL:
        raise ValueError(f"Observable direction must be a unit vector, got norm {direction.norm}.")
    d = direction.as_array()
    return Povm((bloch_matrix(1.0, d), bloch_matrix(1.0, -d)))


def maximally_entangled_vector(dim: int = 2) -> np.ndarray:
    """Σ_k |kk⟩ / √dim."""
    vector = np.zeros(dim * dim, dtype=np.complex128)
    vector[:: dim + 1] = 1.0 / math.sqrt(dim)
    return vector


def phi_plus() -> DensityState:
    """|φ⁺⟩ = (|00⟩ + |11⟩)/√2 on two qubits."""
    return DensityState.from_vector(maximally_entangled_vector(2), (2, 2))


def weyl_operator(dim: int, a: int, b: int) -> np.ndarray:
    """Z^a X^b for the Weyl clock Z and shift X; the Pauli Z^a X^b when dim=2."""
    return np.linalg.matrix_power(clock_operator(dim), a) @ np.linalg.matrix_power(
        shift_operator(dim), b
    )


def bell_basis(dim: int = 2) -> list[np.ndarray]:
    """Generalized Bell vectors (W_x ⊗ 𝟙)|Φ⟩ indexed by x = a·dim + b with W_x = Z^a X^b.

    For dim=2 this is U_{x1x2} = Z^{x1} X^{x2} applied to |φ⁺⟩.
    """
    phi = maximally_entangled_vector(dim)
    basis = []
    for a in range(dim):
        for b in range(dim):
            basis.append(kron(weyl_operator(dim, a, b), np.eye(dim)) @ phi)
    return basis
