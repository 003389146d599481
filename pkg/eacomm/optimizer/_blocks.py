"""Differentiable parameterizations of states, measurements and channels.

Every block maps a slice of the real parameter vector to a stack of matrices and pulls a
gradient back. Matrix gradients follow one convention: ``grad`` is the Hermitian matrix G with
df = Re Tr(G dX). Complex parameters z are stored as (Re z, Im z) and their gradient is
∂f/∂Re z + i ∂f/∂Im z.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass
import math
from typing import Any

import numpy as np

from eacomm.core_linalg import bloch_components
from eacomm.core_linalg import bloch_matrix
from eacomm.core_linalg import hermitian_part
from eacomm.core_linalg import kron
from eacomm.core_linalg import PAULI_X
from eacomm.core_linalg import PAULI_Y
from eacomm.core_linalg import PAULI_Z


NORMALIZATION_EPS = 1e-12

_PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


@dataclass
class _InverseSqrt:
    """K = S^(-1/2) with eigenvalues of S floored at ε, together with its Fréchet derivative."""

    k: np.ndarray
    vectors: np.ndarray
    divided_differences: np.ndarray

    @classmethod
    def of(cls, s: np.ndarray, eps: float = NORMALIZATION_EPS) -> _InverseSqrt:
        values, vectors = np.linalg.eigh(hermitian_part(s))
        roots = np.sqrt(np.maximum(values, eps))
        k = (vectors / roots) @ vectors.conj().T
        outer = roots[:, None] * roots[None, :]
        return cls(k, vectors, -1.0 / (outer * (roots[:, None] + roots[None, :])))

    def derivative(self, h: np.ndarray) -> np.ndarray:
        """D f(S)[H] by the Daleckii-Krein formula."""
        u = self.vectors
        return u @ (self.divided_differences * (u.conj().T @ h @ u)) @ u.conj().T


def _split_complex(theta: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    half = theta.size // 2
    return (theta[:half] + 1j * theta[half:]).reshape(shape)


def _join_complex(z: np.ndarray) -> np.ndarray:
    flat = np.asarray(z).ravel()
    return np.concatenate([flat.real, flat.imag])


class Block(abc.ABC):
    """A group of parameters producing a stack of matrices."""

    size: int

    @abc.abstractmethod
    def forward(self, theta: np.ndarray) -> tuple[np.ndarray, Any]:
        """Return the matrices and a cache for :meth:`backward`."""

    @abc.abstractmethod
    def backward(self, theta: np.ndarray, cache: Any, grad: np.ndarray) -> np.ndarray:
        """Gradient with respect to ``theta`` given the gradient of the matrices."""


class PovmBlock(Block):
    """M_b = K T_b†T_b K with K = S^(-1/2), S = Σ_b T_b†T_b floored at ε."""

    def __init__(self, dim: int, num_outcomes: int, rank: int | None = None) -> None:
        self.dim = dim
        self.num_outcomes = num_outcomes
        self.rank = rank or dim
        self.size = 2 * num_outcomes * self.rank * dim

    def forward(self, theta: np.ndarray) -> tuple[np.ndarray, Any]:
        t = _split_complex(theta, (self.num_outcomes, self.rank, self.dim))
        positives = np.einsum("bri,brj->bij", t.conj(), t)
        inv = _InverseSqrt.of(positives.sum(axis=0))
        elements = inv.k @ positives @ inv.k
        return elements, (t, positives, inv)

    def backward(self, theta: np.ndarray, cache: Any, grad: np.ndarray) -> np.ndarray:
        t, positives, inv = cache
        g = hermitian_part(grad)
        h = np.sum(positives @ inv.k @ g + g @ inv.k @ positives, axis=0)
        common = inv.derivative(h)
        q = inv.k @ g @ inv.k + common
        return _join_complex(2.0 * t @ q)

    def encode(self, elements: np.ndarray) -> np.ndarray:
        """Parameters with T_b = √M_b; decoding returns the elements up to O(ε)."""
        if self.rank != self.dim:
            raise ValueError("Only full-rank POVM blocks can encode arbitrary elements.")
        roots = []
        for element in elements:
            values, vectors = np.linalg.eigh(hermitian_part(element))
            roots.append((vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T)
        return _join_complex(np.array(roots))


def _unit_vector(polar: float, azimuth: float) -> tuple[np.ndarray, np.ndarray]:
    """Unit vector and its Jacobian (columns ∂/∂polar, ∂/∂azimuth)."""
    st, ct = math.sin(polar), math.cos(polar)
    sp, cp = math.sin(azimuth), math.cos(azimuth)
    n = np.array([st * cp, st * sp, ct])
    jacobian = np.array([[ct * cp, -st * sp], [ct * sp, st * cp], [-st, 0.0]])
    return n, jacobian


def _angles(vector: np.ndarray) -> np.ndarray:
    x, y, z = (float(c) for c in vector / np.linalg.norm(vector))
    return np.array([math.acos(max(-1.0, min(1.0, z))), math.atan2(y, x)])


def _bloch_gradient(grad: np.ndarray) -> np.ndarray:
    """∂f/∂n for ½(𝟙 + n·σ), i.e. ½ Re Tr(G σ_k)."""
    return np.array([0.5 * float(np.real(np.trace(grad @ p))) for p in _PAULIS])


class BlochStateBlock(Block):
    """Pure qubit state with Bloch vector at spherical angles (polar, azimuth)."""

    size = 2

    def forward(self, theta: np.ndarray) -> tuple[np.ndarray, Any]:
        n, jacobian = _unit_vector(theta[0], theta[1])
        return bloch_matrix(1.0, n)[None], jacobian

    def backward(self, theta: np.ndarray, cache: Any, grad: np.ndarray) -> np.ndarray:
        return _bloch_gradient(grad[0]) @ cache

    def encode(self, state: np.ndarray) -> np.ndarray:
        _, vector = bloch_components(state)
        return _angles(vector)


class ProjectiveQubitBlock(Block):
    """The pair of projectors ½(𝟙 ± d·σ) for a unit direction d."""

    size = 2

    def forward(self, theta: np.ndarray) -> tuple[np.ndarray, Any]:
        d, jacobian = _unit_vector(theta[0], theta[1])
        return np.array([bloch_matrix(1.0, d), bloch_matrix(1.0, -d)]), jacobian

    def backward(self, theta: np.ndarray, cache: Any, grad: np.ndarray) -> np.ndarray:
        return (_bloch_gradient(grad[0]) - _bloch_gradient(grad[1])) @ cache

    def encode(self, direction: np.ndarray) -> np.ndarray:
        return _angles(direction)


class PureStateBlock(Block):
    """ρ = vv†/‖v‖² for an unnormalized complex vector v."""

    def __init__(self, dim: int) -> None:
        self.dim = dim
        self.size = 2 * dim

    def forward(self, theta: np.ndarray) -> tuple[np.ndarray, Any]:
        v = _split_complex(theta, (self.dim,))
        norm = float(np.real(np.vdot(v, v)))
        return (np.outer(v, v.conj()) / norm)[None], (v, norm)

    def backward(self, theta: np.ndarray, cache: Any, grad: np.ndarray) -> np.ndarray:
        v, norm = cache
        g = hermitian_part(grad[0])
        gv = g @ v
        value = float(np.real(np.vdot(v, gv))) / norm
        return _join_complex(2.0 * (gv - value * v) / norm)

    def encode(self, vector: np.ndarray) -> np.ndarray:
        return _join_complex(np.asarray(vector, dtype=np.complex128))


class ChannelBlock(Block):
    """Kraus operators read off the isometry W = V (V†V)^(-1/2), V of shape (r·d_out, d_in)."""

    def __init__(self, in_dim: int, out_dim: int, num_kraus: int = 2) -> None:
        self.in_dim = in_dim
        self.out_dim = out_dim
        self.num_kraus = num_kraus
        self.size = 2 * num_kraus * out_dim * in_dim

    def forward(self, theta: np.ndarray) -> tuple[np.ndarray, Any]:
        v = _split_complex(theta, (self.num_kraus * self.out_dim, self.in_dim))
        inv = _InverseSqrt.of(v.conj().T @ v)
        kraus = (v @ inv.k).reshape(self.num_kraus, self.out_dim, self.in_dim)
        return kraus, (v, inv)

    def backward(self, theta: np.ndarray, cache: Any, grad: np.ndarray) -> np.ndarray:
        """``grad[j]`` is Y_j with df = Re Tr(Y_j dK_j), shape (d_in, d_out)."""
        v, inv = cache
        y = np.concatenate(list(grad), axis=1)
        q = inv.derivative(hermitian_part(y @ v))
        y_v = inv.k @ y + 2.0 * q @ v.conj().T
        return _join_complex(y_v.conj().T)

    def encode(self, kraus_ops: np.ndarray) -> np.ndarray:
        ops = list(kraus_ops)
        if len(ops) > self.num_kraus:
            raise ValueError(
                f"Channel has {len(ops)} Kraus operators, the block holds {self.num_kraus}."
            )
        zero = np.zeros((self.out_dim, self.in_dim), dtype=np.complex128)
        ops += [zero] * (self.num_kraus - len(ops))
        return _join_complex(np.concatenate(ops, axis=0))


def apply_kraus(kraus: np.ndarray, rho: np.ndarray, local_dim: int) -> np.ndarray:
    """Σ_j (K_j ⊗ 𝟙) ρ (K_j ⊗ 𝟙)† for a channel acting on the first factor."""
    lifted = [kron(k, np.eye(local_dim)) for k in kraus]
    return sum(op @ rho @ op.conj().T for op in lifted)


def kraus_adjoint(
    kraus: np.ndarray, rho: np.ndarray, local_dim: int, grad: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Pull the gradient G of the output state back to the Kraus operators and to ρ.

    Returns (Y, G_ρ) with Y[j] = 2 Tr_B[ρ (K_j ⊗ 𝟙)† G] and G_ρ = Σ_j (K_j ⊗ 𝟙)† G (K_j ⊗ 𝟙).
    """
    _, out_dim, in_dim = kraus.shape
    ys = []
    g_rho = np.zeros_like(rho)
    for k in kraus:
        lifted = kron(k, np.eye(local_dim))
        product = rho @ lifted.conj().T @ grad
        tensor = product.reshape(in_dim, local_dim, out_dim, local_dim)
        ys.append(2.0 * np.einsum("abmb->am", tensor))
        g_rho = g_rho + lifted.conj().T @ grad @ lifted
    return np.array(ys), g_rho
