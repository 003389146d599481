"""Behaviors of parameterized strategy classes with their reverse-mode gradients.

A model owns an ordered list of blocks. ``value_and_grad`` runs the forward pass, evaluates
Σ c·p and pulls the coefficient tensor back through every block. Discrete choices (output
assignments, post-processing tables, output maps) are not parameters; ``best_response`` picks
them optimally for fixed continuous parameters.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass
import itertools
from typing import Any

import numpy as np

from eacomm.core_linalg import DensityState
from eacomm.core_linalg import KrausChannel
from eacomm.core_linalg import kron
from eacomm.core_linalg import partial_trace_matrix
from eacomm.core_linalg import Povm
from eacomm.optimizer._blocks import apply_kraus
from eacomm.optimizer._blocks import BlochStateBlock
from eacomm.optimizer._blocks import Block
from eacomm.optimizer._blocks import ChannelBlock
from eacomm.optimizer._blocks import kraus_adjoint
from eacomm.optimizer._blocks import PovmBlock
from eacomm.optimizer._blocks import ProjectiveQubitBlock
from eacomm.optimizer._blocks import PureStateBlock
from eacomm.protocol import AdaptiveEAClassicalStrategy
from eacomm.protocol import JointMeasurement
from eacomm.protocol import NonAdaptiveEAClassicalStrategy
from eacomm.protocol import PrepareMeasureStrategy
from eacomm.protocol import ProductMeasurement
from eacomm.protocol import QuantumMessageStrategy
from eacomm.protocol import SequentialMeasurement
from eacomm.protocol import Strategy
from eacomm.tasks import LinearFunctional


Discrete = dict[str, np.ndarray]


@dataclass(frozen=True)
class Scenario:
    num_inputs: int
    num_settings: int
    num_outputs: int
    outcome_counts: tuple[int, ...]

    @classmethod
    def of(cls, f: LinearFunctional) -> Scenario:
        x, y, b = f.dims
        return cls(x, y, b, f.outcome_counts)

    def invalid_mask(self) -> np.ndarray:
        """(Y, B) mask of outcomes a setting cannot produce."""
        return np.array(
            [[b >= count for b in range(self.num_outputs)] for count in self.outcome_counts]
        )


def _pad(elements: np.ndarray, num_outcomes: int) -> np.ndarray:
    missing = num_outcomes - elements.shape[0]
    if missing == 0:
        return elements
    zeros = np.zeros((missing,) + elements.shape[1:], dtype=np.complex128)
    return np.concatenate([elements, zeros])


def _povm(elements: np.ndarray) -> Povm:
    return Povm(tuple(elements))


def _masked_argmax(scores: np.ndarray, invalid: np.ndarray) -> np.ndarray:
    """Argmax over the last axis with ``invalid`` (broadcastable) entries excluded."""
    return np.argmax(np.where(invalid, -np.inf, scores), axis=-1)


class StrategyModel(abc.ABC):
    """Parameterized family of strategies for a fixed scenario."""

    def __init__(self, scenario: Scenario) -> None:
        self.scenario = scenario
        self.blocks: list[Block] = []

    def _add(self, block: Block) -> int:
        self.blocks.append(block)
        return len(self.blocks) - 1

    @property
    def num_params(self) -> int:
        return sum(block.size for block in self.blocks)

    def _slices(self, params: np.ndarray) -> list[np.ndarray]:
        if params.shape != (self.num_params,):
            raise ValueError(
                f"Expected a parameter vector of length {self.num_params}, got {params.shape}."
            )
        offsets = np.cumsum([0] + [block.size for block in self.blocks])
        return [params[offsets[i] : offsets[i + 1]] for i in range(len(self.blocks))]

    def _forward(self, params: np.ndarray) -> tuple[list[np.ndarray], list[Any]]:
        outputs, caches = [], []
        for block, theta in zip(self.blocks, self._slices(params)):
            matrices, cache = block.forward(theta)
            outputs.append(matrices)
            caches.append(cache)
        return outputs, caches

    def _backward(
        self, params: np.ndarray, caches: list[Any], grads: list[np.ndarray]
    ) -> np.ndarray:
        return np.concatenate(
            [
                block.backward(theta, cache, grad)
                for block, theta, cache, grad in zip(
                    self.blocks, self._slices(params), caches, grads
                )
            ]
        )

    def default_discrete(self) -> Discrete:
        return {}

    def best_response(self, f: LinearFunctional, params: np.ndarray) -> Discrete:
        return self.default_discrete()

    def behavior_table(self, params: np.ndarray, discrete: Discrete) -> np.ndarray:
        outputs, _ = self._forward(params)
        return self._table(outputs, discrete)

    def value(self, f: LinearFunctional, params: np.ndarray, discrete: Discrete) -> float:
        return float(np.sum(f.coeffs * self.behavior_table(params, discrete)) + f.offset)

    def value_and_grad(
        self, f: LinearFunctional, params: np.ndarray, discrete: Discrete
    ) -> tuple[float, np.ndarray]:
        outputs, caches = self._forward(params)
        value = float(np.sum(f.coeffs * self._table(outputs, discrete)) + f.offset)
        grads = self._pullback(outputs, discrete, f.coeffs)
        return value, self._backward(params, caches, grads)

    @abc.abstractmethod
    def _table(self, outputs: list[np.ndarray], discrete: Discrete) -> np.ndarray:
        """Behavior p[x, y, b]."""

    @abc.abstractmethod
    def _pullback(
        self, outputs: list[np.ndarray], discrete: Discrete, coeffs: np.ndarray
    ) -> list[np.ndarray]:
        """Gradient of Σ c·p with respect to every block output."""

    @abc.abstractmethod
    def to_strategy(self, params: np.ndarray, discrete: Discrete) -> Strategy:
        """The validated strategy object for these parameters."""


class PrepareMeasureModel(StrategyModel):
    """Pure qubit states at Bloch angles and either general or projective qubit measurements.

    Projective settings place the projectors of ±d on outcomes ``placements[y] = (i, j)``.
    """

    def __init__(self, scenario: Scenario, projective: bool) -> None:
        super().__init__(scenario)
        self.projective = projective
        self._states = [self._add(BlochStateBlock()) for _ in range(scenario.num_inputs)]
        if projective:
            self._measurements = [
                self._add(ProjectiveQubitBlock()) for _ in range(scenario.num_settings)
            ]
        else:
            self._measurements = [
                self._add(PovmBlock(2, count)) for count in scenario.outcome_counts
            ]

    def default_discrete(self) -> Discrete:
        if not self.projective:
            return {}
        placements = [(0, 1 if count > 1 else 0) for count in self.scenario.outcome_counts]
        return {"placements": np.array(placements, dtype=int)}

    def _elements(self, outputs: list[np.ndarray], discrete: Discrete) -> np.ndarray:
        num_outputs = self.scenario.num_outputs
        stack = np.zeros((self.scenario.num_settings, num_outputs, 2, 2), dtype=np.complex128)
        for y, index in enumerate(self._measurements):
            if self.projective:
                i, j = discrete["placements"][y]
                stack[y, i] += outputs[index][0]
                stack[y, j] += outputs[index][1]
            else:
                stack[y] = _pad(outputs[index], num_outputs)
        return stack

    def _states_of(self, outputs: list[np.ndarray]) -> np.ndarray:
        return np.array([outputs[index][0] for index in self._states])

    def _table(self, outputs: list[np.ndarray], discrete: Discrete) -> np.ndarray:
        rho = self._states_of(outputs)
        return np.real(np.einsum("xkl,yblk->xyb", rho, self._elements(outputs, discrete)))

    def _pullback(
        self, outputs: list[np.ndarray], discrete: Discrete, coeffs: np.ndarray
    ) -> list[np.ndarray]:
        rho = self._states_of(outputs)
        elements = self._elements(outputs, discrete)
        grads: list[np.ndarray] = [np.empty(0)] * len(self.blocks)
        g_states = np.einsum("xyb,ybkl->xkl", coeffs, elements)
        for x, index in enumerate(self._states):
            grads[index] = g_states[x][None]
        g_elements = np.einsum("xyb,xkl->ybkl", coeffs, rho)
        for y, index in enumerate(self._measurements):
            if self.projective:
                i, j = discrete["placements"][y]
                grads[index] = np.array([g_elements[y, i], g_elements[y, j]])
            else:
                grads[index] = g_elements[y, : self.scenario.outcome_counts[y]]
        return grads

    def best_response(self, f: LinearFunctional, params: np.ndarray) -> Discrete:
        if not self.projective:
            return {}
        outputs, _ = self._forward(params)
        rho = self._states_of(outputs)
        placements = []
        for y, index in enumerate(self._measurements):
            # q[x, s]: probability of the + (s=0) and − (s=1) projector on state x.
            q = np.real(np.einsum("xkl,slk->xs", rho, outputs[index]))
            count = self.scenario.outcome_counts[y]
            best, best_score = (0, 0), -np.inf
            for i, j in itertools.product(range(count), repeat=2):
                score = float(f.coeffs[:, y, i] @ q[:, 0] + f.coeffs[:, y, j] @ q[:, 1])
                if score > best_score + 1e-15:
                    best, best_score = (i, j), score
            placements.append(best)
        return {"placements": np.array(placements, dtype=int)}

    def to_strategy(self, params: np.ndarray, discrete: Discrete) -> Strategy:
        outputs, _ = self._forward(params)
        states = tuple(DensityState(rho) for rho in self._states_of(outputs))
        return PrepareMeasureStrategy(
            states, tuple(_povm(e) for e in self._elements(outputs, discrete))
        )


class EAClassicalModel(StrategyModel):
    """Shared pure state, Alice's D-outcome POVMs and Bob's measurements.

    Adaptive: Bob holds one POVM per (y, m). Non-adaptive: one base POVM per y and the
    post-processing table ``g[y, m, b']``. Local dimensions of 1 give classical strategies.
    """

    def __init__(
        self,
        scenario: Scenario,
        message_size: int,
        local_dims: tuple[int, int],
        adaptive: bool,
        base_outcomes: int | None = None,
    ) -> None:
        super().__init__(scenario)
        self.message_size = message_size
        self.local_dims = local_dims
        self.adaptive = adaptive
        self.base_outcomes = base_outcomes or scenario.num_outputs
        dim_a, dim_b = local_dims
        self._state = self._add(PureStateBlock(dim_a * dim_b))
        self._alice = [
            self._add(PovmBlock(dim_a, message_size)) for _ in range(scenario.num_inputs)
        ]
        if adaptive:
            self._bob = [
                [self._add(PovmBlock(dim_b, count)) for _ in range(message_size)]
                for count in scenario.outcome_counts
            ]
        else:
            self._base = [
                self._add(PovmBlock(dim_b, self.base_outcomes))
                for _ in range(scenario.num_settings)
            ]

    def default_discrete(self) -> Discrete:
        if self.adaptive:
            return {}
        counts = np.array(self.scenario.outcome_counts)
        g = np.minimum(np.arange(self.base_outcomes)[None, None, :], counts[:, None, None] - 1)
        return {"postprocess": np.broadcast_to(g, self._g_shape).copy()}

    @property
    def _g_shape(self) -> tuple[int, int, int]:
        return (self.scenario.num_settings, self.message_size, self.base_outcomes)

    def _rho4(self, outputs: list[np.ndarray]) -> np.ndarray:
        dim_a, dim_b = self.local_dims
        return outputs[self._state][0].reshape(dim_a, dim_b, dim_a, dim_b)

    def _alice_stack(self, outputs: list[np.ndarray]) -> np.ndarray:
        return np.array([outputs[index] for index in self._alice])

    def _base_stack(self, outputs: list[np.ndarray]) -> np.ndarray:
        return np.array([outputs[index] for index in self._base])

    def _bob_stack(self, outputs: list[np.ndarray], discrete: Discrete) -> np.ndarray:
        """Effective B[y, m, b] after lifting any post-processing."""
        num_outputs = self.scenario.num_outputs
        if self.adaptive:
            return np.array(
                [[_pad(outputs[index], num_outputs) for index in row] for row in self._bob]
            )
        base = self._base_stack(outputs)
        g = discrete["postprocess"]
        dim_b = self.local_dims[1]
        stack = np.zeros(
            (self.scenario.num_settings, self.message_size, num_outputs, dim_b, dim_b),
            dtype=np.complex128,
        )
        for y, m, c in np.ndindex(*g.shape):
            stack[y, m, g[y, m, c]] += base[y, c]
        return stack

    def _conditional(self, outputs: list[np.ndarray]) -> np.ndarray:
        return np.einsum("ikjl,xmji->xmkl", self._rho4(outputs), self._alice_stack(outputs))

    def _table(self, outputs: list[np.ndarray], discrete: Discrete) -> np.ndarray:
        sigma = self._conditional(outputs)
        return np.real(np.einsum("xmkl,ymblk->xyb", sigma, self._bob_stack(outputs, discrete)))

    def _pullback(
        self, outputs: list[np.ndarray], discrete: Discrete, coeffs: np.ndarray
    ) -> list[np.ndarray]:
        rho4 = self._rho4(outputs)
        alice = self._alice_stack(outputs)
        sigma = self._conditional(outputs)
        bob = self._bob_stack(outputs, discrete)
        grads: list[np.ndarray] = [np.empty(0)] * len(self.blocks)

        bob_sum = np.einsum("xyb,ymbkl->xmkl", coeffs, bob)
        dim = int(np.prod(self.local_dims))
        g_state = np.einsum("xmji,xmlk->jlik", alice, bob_sum).reshape(dim, dim)
        grads[self._state] = g_state[None]
        g_alice = np.einsum("ikjl,xmlk->xmij", rho4, bob_sum)
        for x, index in enumerate(self._alice):
            grads[index] = g_alice[x]

        g_bob = np.einsum("xyb,xmkl->ymbkl", coeffs, sigma)
        if self.adaptive:
            for y, row in enumerate(self._bob):
                for m, index in enumerate(row):
                    grads[index] = g_bob[y, m, : self.scenario.outcome_counts[y]]
        else:
            g = discrete["postprocess"]
            for y, index in enumerate(self._base):
                grads[index] = np.array(
                    [
                        sum(g_bob[y, m, g[y, m, c]] for m in range(self.message_size))
                        for c in range(self.base_outcomes)
                    ]
                )
        return grads

    def best_response(self, f: LinearFunctional, params: np.ndarray) -> Discrete:
        if self.adaptive:
            return {}
        outputs, _ = self._forward(params)
        sigma = self._conditional(outputs)
        joint = np.real(np.einsum("xmkl,yclk->xymc", sigma, self._base_stack(outputs)))
        scores = np.einsum("xyb,xymc->ymcb", f.coeffs, joint)
        invalid = self.scenario.invalid_mask()[:, None, None, :]
        return {"postprocess": _masked_argmax(scores, invalid)}

    def to_strategy(self, params: np.ndarray, discrete: Discrete) -> Strategy:
        outputs, _ = self._forward(params)
        state = DensityState(outputs[self._state][0], self.local_dims)
        alice = tuple(_povm(outputs[index]) for index in self._alice)
        if self.adaptive:
            bob = self._bob_stack(outputs, discrete)
            return AdaptiveEAClassicalStrategy(
                state, alice, tuple(tuple(_povm(e) for e in row) for row in bob)
            )
        return NonAdaptiveEAClassicalStrategy(
            state,
            alice,
            tuple(_povm(outputs[index]) for index in self._base),
            discrete["postprocess"],
            self.scenario.num_outputs,
        )


class QuantumMessageModel(StrategyModel):
    """Shared pure state, Alice's encoding channels and one Bob measurement class."""

    def __init__(
        self,
        scenario: Scenario,
        measurement_class: str,
        local_dims: tuple[int, int],
        message_dim: int,
        num_kraus: int = 2,
    ) -> None:
        super().__init__(scenario)
        self.measurement_class = measurement_class
        self.local_dims = local_dims
        self.message_dim = message_dim
        dim_a, dim_b = local_dims
        self._state = self._add(PureStateBlock(dim_a * dim_b))
        self._channels = [
            self._add(ChannelBlock(dim_a, message_dim, num_kraus))
            for _ in range(scenario.num_inputs)
        ]
        self._bob: list[list[int]] = []
        for count in scenario.outcome_counts:
            if measurement_class == "joint":
                self._bob.append([self._add(PovmBlock(message_dim * dim_b, count))])
            elif measurement_class == "product":
                self._bob.append(
                    [
                        self._add(PovmBlock(message_dim, message_dim)),
                        self._add(PovmBlock(dim_b, dim_b)),
                    ]
                )
            elif measurement_class in ("seq_M_then_B", "seq_B_then_M"):
                first_dim, second_dim = self._stage_dims
                first = self._add(PovmBlock(first_dim, first_dim))
                second = [self._add(PovmBlock(second_dim, count)) for _ in range(first_dim)]
                self._bob.append([first] + second)
            else:
                raise ValueError(f"Unknown measurement class '{measurement_class}'.")

    @property
    def _stage_dims(self) -> tuple[int, int]:
        if self.measurement_class == "seq_M_then_B":
            return self.message_dim, self.local_dims[1]
        return self.local_dims[1], self.message_dim

    @property
    def _joint_dims(self) -> list[int]:
        return [self.message_dim, self.local_dims[1]]

    def default_discrete(self) -> Discrete:
        if self.measurement_class != "product":
            return {}
        dim_m, dim_b = self.message_dim, self.local_dims[1]
        maps = [
            np.arange(dim_m * dim_b).reshape(dim_m, dim_b) % count
            for count in self.scenario.outcome_counts
        ]
        return {"output_maps": np.array(maps, dtype=int)}

    def _message_states(self, outputs: list[np.ndarray]) -> np.ndarray:
        rho = outputs[self._state][0]
        return np.array(
            [apply_kraus(outputs[index], rho, self.local_dims[1]) for index in self._channels]
        )

    def _stage_kron(self, first: np.ndarray, second: np.ndarray) -> np.ndarray:
        """Operator on message ⊗ local for a first-stage and a second-stage element."""
        if self.measurement_class == "seq_M_then_B":
            return kron(first, second)
        return kron(second, first)

    def _measurement(self, y: int, outputs: list[np.ndarray], discrete: Discrete) -> np.ndarray:
        num_outputs = self.scenario.num_outputs
        indices = self._bob[y]
        if self.measurement_class == "joint":
            return _pad(outputs[indices[0]], num_outputs)
        dim = self.message_dim * self.local_dims[1]
        elements = np.zeros((num_outputs, dim, dim), dtype=np.complex128)
        if self.measurement_class == "product":
            first, second = outputs[indices[0]], outputs[indices[1]]
            output_map = discrete["output_maps"][y]
            for b1, b2 in np.ndindex(*output_map.shape):
                elements[output_map[b1, b2]] += kron(first[b1], second[b2])
            return elements
        first = outputs[indices[0]]
        for c, index in enumerate(indices[1:]):
            for b, element in enumerate(outputs[index]):
                elements[b] += self._stage_kron(first[c], element)
        return elements

    def _measurements(self, outputs: list[np.ndarray], discrete: Discrete) -> np.ndarray:
        return np.array(
            [self._measurement(y, outputs, discrete) for y in range(self.scenario.num_settings)]
        )

    def _table(self, outputs: list[np.ndarray], discrete: Discrete) -> np.ndarray:
        tau = self._message_states(outputs)
        return np.real(np.einsum("xkl,yblk->xyb", tau, self._measurements(outputs, discrete)))

    def _trace_out(self, matrix: np.ndarray, keep: int) -> np.ndarray:
        return partial_trace_matrix(matrix, self._joint_dims, [keep])

    def _pullback(
        self, outputs: list[np.ndarray], discrete: Discrete, coeffs: np.ndarray
    ) -> list[np.ndarray]:
        rho = outputs[self._state][0]
        tau = self._message_states(outputs)
        elements = self._measurements(outputs, discrete)
        grads: list[np.ndarray] = [np.empty(0)] * len(self.blocks)

        g_tau = np.einsum("xyb,ybkl->xkl", coeffs, elements)
        g_rho = np.zeros_like(rho)
        for x, index in enumerate(self._channels):
            ys, g_rho_x = kraus_adjoint(outputs[index], rho, self.local_dims[1], g_tau[x])
            grads[index] = ys
            g_rho = g_rho + g_rho_x
        grads[self._state] = g_rho[None]

        g_elements = np.einsum("xyb,xkl->ybkl", coeffs, tau)
        dim_m, dim_b = self.message_dim, self.local_dims[1]
        for y, indices in enumerate(self._bob):
            g = g_elements[y]
            count = self.scenario.outcome_counts[y]
            if self.measurement_class == "joint":
                grads[indices[0]] = g[:count]
                continue
            if self.measurement_class == "product":
                first, second = outputs[indices[0]], outputs[indices[1]]
                output_map = discrete["output_maps"][y]
                g_first = np.zeros_like(first)
                g_second = np.zeros_like(second)
                for b1, b2 in np.ndindex(*output_map.shape):
                    gb = g[output_map[b1, b2]]
                    g_first[b1] += self._trace_out(gb @ kron(np.eye(dim_m), second[b2]), 0)
                    g_second[b2] += self._trace_out(gb @ kron(first[b1], np.eye(dim_b)), 1)
                grads[indices[0]], grads[indices[1]] = g_first, g_second
                continue
            first = outputs[indices[0]]
            first_dim, second_dim = self._stage_dims
            # Subsystem index of the first stage inside message ⊗ local.
            first_slot = 0 if self.measurement_class == "seq_M_then_B" else 1
            g_first = np.zeros_like(first)
            for c, index in enumerate(indices[1:]):
                second = outputs[index]
                g_second = np.zeros_like(second)
                for b in range(count):
                    lifted_second = self._stage_kron(np.eye(first_dim), second[b])
                    lifted_first = self._stage_kron(first[c], np.eye(second_dim))
                    g_first[c] += self._trace_out(g[b] @ lifted_second, first_slot)
                    g_second[b] = self._trace_out(g[b] @ lifted_first, 1 - first_slot)
                grads[index] = g_second
            grads[indices[0]] = g_first
        return grads

    def best_response(self, f: LinearFunctional, params: np.ndarray) -> Discrete:
        if self.measurement_class != "product":
            return {}
        outputs, _ = self._forward(params)
        tau = self._message_states(outputs)
        invalid = self.scenario.invalid_mask()
        maps = []
        for y, indices in enumerate(self._bob):
            first, second = outputs[indices[0]], outputs[indices[1]]
            products = np.array([[kron(m1, m2) for m2 in second] for m1 in first])
            q = np.real(np.einsum("xkl,pqlk->xpq", tau, products))
            scores = np.einsum("xb,xpq->pqb", f.coeffs[:, y, :], q)
            maps.append(_masked_argmax(scores, invalid[y][None, None, :]))
        return {"output_maps": np.array(maps, dtype=int)}

    def to_strategy(self, params: np.ndarray, discrete: Discrete) -> Strategy:
        outputs, _ = self._forward(params)
        state = DensityState(outputs[self._state][0], self.local_dims)
        channels = tuple(KrausChannel(tuple(outputs[index])) for index in self._channels)
        num_outputs = self.scenario.num_outputs
        bob: list[JointMeasurement | ProductMeasurement | SequentialMeasurement] = []
        for y, indices in enumerate(self._bob):
            if self.measurement_class == "joint":
                bob.append(JointMeasurement(_povm(_pad(outputs[indices[0]], num_outputs))))
            elif self.measurement_class == "product":
                bob.append(
                    ProductMeasurement.deterministic(
                        _povm(outputs[indices[0]]),
                        _povm(outputs[indices[1]]),
                        discrete["output_maps"][y],
                        num_outputs,
                    )
                )
            else:
                bob.append(
                    SequentialMeasurement(
                        _povm(outputs[indices[0]]),
                        tuple(_povm(_pad(outputs[i], num_outputs)) for i in indices[1:]),
                        self.measurement_class,
                    )
                )
        return QuantumMessageStrategy(state, channels, tuple(bob))
