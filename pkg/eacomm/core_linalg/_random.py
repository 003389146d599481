from __future__ import annotations

from typing import Sequence

import numpy as np

from eacomm.core_linalg._matrix import inverse_sqrt_psd
from eacomm.core_linalg._quantum import DensityState
from eacomm.core_linalg._quantum import KrausChannel
from eacomm.core_linalg._quantum import Povm


def _ginibre(rng: np.random.RandomState, rows: int, cols: int) -> np.ndarray:
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def random_unitary(dim: int, rng: np.random.RandomState) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    q, r = np.linalg.qr(_ginibre(rng, dim, dim))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_pure_state(dims: Sequence[int], rng: np.random.RandomState) -> DensityState:
    dim = int(np.prod(dims))
    return DensityState.from_vector(_ginibre(rng, dim, 1)[:, 0], tuple(dims))


def random_density_state(
    dims: Sequence[int], rng: np.random.RandomState, rank: int | None = None
) -> DensityState:
    """Random mixed state G G† / Tr(G G†) with G a dim x rank Ginibre matrix."""
    dim = int(np.prod(dims))
    g = _ginibre(rng, dim, rank or dim)
    rho = g @ g.conj().T
    return DensityState(rho / np.real(np.trace(rho)), tuple(dims))


def random_povm(
    dim: int, num_outcomes: int, rng: np.random.RandomState, rank: int | None = None
) -> Povm:
    """Random POVM S^{-1/2} T_b†T_b S^{-1/2} with Ginibre T_b of the given rank."""
    ops = [_ginibre(rng, rank or dim, dim) for _ in range(num_outcomes)]
    positives = [t.conj().T @ t for t in ops]
    k = inverse_sqrt_psd(sum(positives))
    elements = tuple(0.5 * (k @ p @ k + (k @ p @ k).conj().T) for p in positives)
    return Povm(elements)


def random_channel(
    in_dim: int, out_dim: int, rng: np.random.RandomState, num_kraus: int = 2
) -> KrausChannel:
    """Random channel from a Ginibre Kraus stack V normalized to the isometry V (V†V)^{-1/2}."""
    stack = _ginibre(rng, num_kraus * out_dim, in_dim)
    isometry = stack @ inverse_sqrt_psd(stack.conj().T @ stack)
    return KrausChannel(tuple(isometry[k * out_dim : (k + 1) * out_dim] for k in range(num_kraus)))
