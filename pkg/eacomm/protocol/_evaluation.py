from __future__ import annotations

from dataclasses import dataclass
import itertools

import numpy as np

from eacomm.core_linalg import commutator
from eacomm.core_linalg import DensityState
from eacomm.core_linalg import operator_norm
from eacomm.core_linalg import Povm
from eacomm.protocol._behavior import Behavior
from eacomm.protocol._strategy import AdaptiveEAClassicalStrategy
from eacomm.protocol._strategy import NonAdaptiveEAClassicalStrategy
from eacomm.protocol._strategy import PrepareMeasureStrategy
from eacomm.protocol._strategy import QuantumMessageStrategy
from eacomm.protocol._strategy import Strategy


def conditional_states(shared_state: DensityState, alice: tuple[Povm, ...]) -> np.ndarray:
    """Bob's unnormalized states σ[x, m] = Tr_A[ρ (A_{m|x} ⊗ 𝟙)].

    The trace of σ[x, m] is the probability that Alice sends m on input x.
    """
    dim_a, dim_b = shared_state.dims
    rho = shared_state.matrix.reshape(dim_a, dim_b, dim_a, dim_b)
    elements = np.array([[e for e in povm.elements] for povm in alice])
    return np.einsum("ikjl,xmji->xmkl", rho, elements)


def _born(states: np.ndarray, elements: np.ndarray) -> np.ndarray:
    """Re Tr(σ E) for stacks of states (..., d, d) and elements (..., d, d)."""
    return np.real(np.einsum("...kl,...lk->...", states, elements))


def behavior_of_adaptive(s: AdaptiveEAClassicalStrategy) -> Behavior:
    """p(b|x,y) = Σ_m Tr(ρ A_{m|x} ⊗ B_{b|y,m})."""
    sigma = conditional_states(s.shared_state, s.alice)
    bob = np.array([[[e for e in povm.elements] for povm in row] for row in s.bob])
    # sigma: (X, D, d, d); bob: (Y, D, B, d, d)
    table = np.real(np.einsum("xmkl,ymblk->xyb", sigma, bob))
    return Behavior(table)


def behavior_of_nonadaptive(s: NonAdaptiveEAClassicalStrategy) -> Behavior:
    """p(b|x,y) = Σ_{m,b'} δ(g(y,m,b') = b) Tr(ρ A_{m|x} ⊗ B_{b'|y})."""
    sigma = conditional_states(s.shared_state, s.alice)
    base = np.array([[e for e in povm.elements] for povm in s.bob_base])
    joint = np.real(np.einsum("xmkl,yclk->xymc", sigma, base))
    table = np.zeros((s.num_inputs, s.num_settings, s.num_outputs))
    for y, m, c in itertools.product(
        range(s.num_settings), range(s.message_size), range(s.base_outcomes)
    ):
        table[:, y, s.postprocess[y, m, c]] += joint[:, y, m, c]
    return Behavior(table)


def behavior_of_prepare_measure(s: PrepareMeasureStrategy) -> Behavior:
    states = np.array([state.matrix for state in s.states])
    elements = np.array([[e for e in povm.elements] for povm in s.povms])
    return Behavior(np.real(np.einsum("xkl,yblk->xyb", states, elements)))


def message_states(s: QuantumMessageStrategy) -> np.ndarray:
    """States (Φ_x ⊗ id)[ρ] on message ⊗ Bob's share, stacked over x."""
    return np.array(
        [channel.apply(s.shared_state.matrix, s.shared_state.dims) for channel in s.alice_channels]
    )


def behavior_of_quantum(s: QuantumMessageStrategy) -> Behavior:
    """p(b|x,y) = Tr((Φ_x ⊗ id)[ρ] B^{MB}_{b|y}) with the assembled joint POVMs."""
    states = message_states(s)
    elements = np.array([[e for e in povm.elements] for povm in s.assembled_povms])
    return Behavior(np.real(np.einsum("xkl,yblk->xyb", states, elements)))


def behavior_of(strategy: Strategy) -> Behavior:
    """Behavior of any supported strategy kind."""
    if isinstance(strategy, AdaptiveEAClassicalStrategy):
        return behavior_of_adaptive(strategy)
    if isinstance(strategy, NonAdaptiveEAClassicalStrategy):
        return behavior_of_nonadaptive(strategy)
    if isinstance(strategy, PrepareMeasureStrategy):
        return behavior_of_prepare_measure(strategy)
    if isinstance(strategy, QuantumMessageStrategy):
        return behavior_of_quantum(strategy)
    raise TypeError(f"Unsupported strategy type {type(strategy).__name__}.")


def lift_to_adaptive(s: NonAdaptiveEAClassicalStrategy) -> AdaptiveEAClassicalStrategy:
    """Rewrite a non-adaptive strategy with message dependent POVMs
    B_{b|y,m} = Σ_{b': g(y,m,b') = b} B_{b'|y}."""
    dim = s.bob_base[0].dim
    bob = []
    for y, base in enumerate(s.bob_base):
        row = []
        for m in range(s.message_size):
            elements = [np.zeros((dim, dim), dtype=np.complex128) for _ in range(s.num_outputs)]
            for c, element in enumerate(base.elements):
                elements[s.postprocess[y, m, c]] = elements[s.postprocess[y, m, c]] + element
            row.append(Povm(tuple(elements)))
        bob.append(tuple(row))
    return AdaptiveEAClassicalStrategy(s.shared_state, s.alice, tuple(bob))


@dataclass(frozen=True)
class NonAdaptivityReport:
    """Outcome of the commutation test on Bob's measurements.

    ``witness`` is (y, m, m', b, b') for the largest commutator.
    """

    is_nonadaptive: bool
    max_commutator_norm: float
    witness: tuple[int, int, int, int, int] | None
    tol: float

    def __bool__(self) -> bool:
        return self.is_nonadaptive

    @property
    def verdict(self) -> str:
        return "NON-ADAPTIVE" if self.is_nonadaptive else "ADAPTIVE"


def check_nonadaptive(s: AdaptiveEAClassicalStrategy, tol: float = 1e-8) -> NonAdaptivityReport:
    """Test [B_{b|y,m}, B_{b'|y,m'}] = 0 for every y, m, m', b, b' in operator norm."""
    worst = 0.0
    witness = None
    for y, row in enumerate(s.bob):
        for m, m_prime in itertools.combinations_with_replacement(range(len(row)), 2):
            for b, first in enumerate(row[m].elements):
                for b_prime, second in enumerate(row[m_prime].elements):
                    norm = operator_norm(commutator(first, second))
                    if norm > worst:
                        worst = norm
                        witness = (y, m, m_prime, b, b_prime)
    return NonAdaptivityReport(worst <= tol, worst, witness, tol)
