from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar
from typing import Union

import numpy as np

from eacomm._errors import InvariantViolation
from eacomm.core_linalg import DensityState
from eacomm.core_linalg import KrausChannel
from eacomm.core_linalg import kron
from eacomm.core_linalg import Povm


MEASUREMENT_CLASSES = ("joint", "product", "seq_M_then_B", "seq_B_then_M")


def _bipartite_dims(state: DensityState) -> tuple[int, int]:
    if len(state.dims) != 2:
        raise ValueError(f"The shared state must be bipartite, got dims {state.dims}.")
    return state.dims[0], state.dims[1]


def _check_povms(povms: tuple[Povm, ...], dim: int, num_outcomes: int, what: str) -> None:
    for i, povm in enumerate(povms):
        if povm.dim != dim:
            raise ValueError(f"{what} {i} acts on dimension {povm.dim}, expected {dim}.")
        if povm.num_outcomes != num_outcomes:
            raise ValueError(
                f"{what} {i} has {povm.num_outcomes} outcomes, expected {num_outcomes}."
            )


@dataclass(frozen=True, eq=False)
class AdaptiveEAClassicalStrategy:
    """Shared state, Alice's message measurements ``alice[x]`` and Bob's ``bob[y][m]``.

    Bob picks his measurement after reading the message m.
    """

    shared_state: DensityState
    alice: tuple[Povm, ...]
    bob: tuple[tuple[Povm, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alice", tuple(self.alice))
        object.__setattr__(self, "bob", tuple(tuple(row) for row in self.bob))
        dim_a, dim_b = _bipartite_dims(self.shared_state)
        if not self.alice or not self.bob:
            raise ValueError("Alice and Bob need at least one measurement each.")
        _check_povms(self.alice, dim_a, self.alice[0].num_outcomes, "Alice POVM")
        for y, row in enumerate(self.bob):
            if len(row) != self.message_size:
                raise ValueError(
                    f"Bob's table row {y} has {len(row)} entries, expected {self.message_size}."
                )
            _check_povms(row, dim_b, self.bob[0][0].num_outcomes, f"Bob POVM for y={y}, m")

    @property
    def message_size(self) -> int:
        return self.alice[0].num_outcomes

    @property
    def num_inputs(self) -> int:
        return len(self.alice)

    @property
    def num_settings(self) -> int:
        return len(self.bob)

    @property
    def num_outputs(self) -> int:
        return self.bob[0][0].num_outcomes


@dataclass(frozen=True, eq=False)
class NonAdaptiveEAClassicalStrategy:
    """Bob measures ``bob_base[y]`` regardless of the message and outputs
    ``postprocess[y, m, b']``."""

    shared_state: DensityState
    alice: tuple[Povm, ...]
    bob_base: tuple[Povm, ...]
    postprocess: np.ndarray
    num_outputs: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "alice", tuple(self.alice))
        object.__setattr__(self, "bob_base", tuple(self.bob_base))
        dim_a, dim_b = _bipartite_dims(self.shared_state)
        if not self.alice or not self.bob_base:
            raise ValueError("Alice and Bob need at least one measurement each.")
        _check_povms(self.alice, dim_a, self.alice[0].num_outcomes, "Alice POVM")
        base_outcomes = self.bob_base[0].num_outcomes
        _check_povms(self.bob_base, dim_b, base_outcomes, "Bob base POVM")

        table = np.array(self.postprocess, dtype=int)
        expected = (len(self.bob_base), self.message_size, base_outcomes)
        if table.shape != expected:
            raise ValueError(f"postprocess has shape {table.shape}, expected {expected}.")
        if table.size and (table.min() < 0 or table.max() >= self.num_outputs):
            raise ValueError(f"postprocess values must lie in [0, {self.num_outputs}).")
        table.setflags(write=False)
        object.__setattr__(self, "postprocess", table)

    @property
    def message_size(self) -> int:
        return self.alice[0].num_outcomes

    @property
    def num_inputs(self) -> int:
        return len(self.alice)

    @property
    def num_settings(self) -> int:
        return len(self.bob_base)

    @property
    def base_outcomes(self) -> int:
        return self.bob_base[0].num_outcomes


@dataclass(frozen=True, eq=False)
class PrepareMeasureStrategy:
    """Unassisted quantum message: Alice sends ``states[x]``, Bob measures ``povms[y]``."""

    states: tuple[DensityState, ...]
    povms: tuple[Povm, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "povms", tuple(self.povms))
        if not self.states or not self.povms:
            raise ValueError("At least one state and one measurement are required.")
        dim = self.states[0].dim
        if any(s.dim != dim for s in self.states):
            raise ValueError("All prepared states must share one dimension.")
        _check_povms(self.povms, dim, self.povms[0].num_outcomes, "POVM")

    @property
    def num_inputs(self) -> int:
        return len(self.states)

    @property
    def num_settings(self) -> int:
        return len(self.povms)

    @property
    def num_outputs(self) -> int:
        return self.povms[0].num_outcomes


@dataclass(frozen=True, eq=False)
class JointMeasurement:
    """Arbitrary POVM on the message and Bob's share together."""

    povm: Povm
    measurement_class: ClassVar[str] = "joint"

    def assemble(self, message_dim: int, local_dim: int) -> Povm:
        if self.povm.dim != message_dim * local_dim:
            raise ValueError(
                f"Joint POVM acts on {self.povm.dim}, expected {message_dim * local_dim}."
            )
        return self.povm

    @property
    def num_outputs(self) -> int:
        return self.povm.num_outcomes


@dataclass(frozen=True, eq=False)
class ProductMeasurement:
    """Independent measurements on the message and on Bob's share.

    ``output_map[b1, b2, b]`` is the probability of answering b after outcomes (b1, b2).
    """

    message_povm: Povm
    local_povm: Povm
    output_map: np.ndarray
    measurement_class: ClassVar[str] = "product"

    def __post_init__(self) -> None:
        table = np.array(self.output_map, dtype=float)
        expected = (self.message_povm.num_outcomes, self.local_povm.num_outcomes)
        if table.ndim != 3 or table.shape[:2] != expected:
            raise ValueError(f"output_map must have shape {expected} + (B,), got {table.shape}.")
        deviation = max(
            float(np.max(-table, initial=0.0)),
            float(np.max(np.abs(table.sum(axis=2) - 1.0), initial=0.0)),
        )
        if deviation > 1e-10:
            raise InvariantViolation("output_map rows are not distributions", deviation)
        table.setflags(write=False)
        object.__setattr__(self, "output_map", table)

    @classmethod
    def deterministic(
        cls, message_povm: Povm, local_povm: Povm, mapping: np.ndarray, num_outputs: int
    ) -> ProductMeasurement:
        """Product measurement answering ``mapping[b1, b2]``."""
        mapping = np.asarray(mapping, dtype=int)
        table = np.zeros(mapping.shape + (num_outputs,))
        for (b1, b2), b in np.ndenumerate(mapping):
            table[b1, b2, b] = 1.0
        return cls(message_povm, local_povm, table)

    def assemble(self, message_dim: int, local_dim: int) -> Povm:
        if (self.message_povm.dim, self.local_povm.dim) != (message_dim, local_dim):
            raise ValueError(
                "Component POVM dimensions do not match the message and local systems."
            )
        elements = []
        for b in range(self.num_outputs):
            element = np.zeros((message_dim * local_dim,) * 2, dtype=np.complex128)
            for (b1, b2), weight in np.ndenumerate(self.output_map[:, :, b]):
                if weight != 0.0:
                    element += weight * kron(
                        self.message_povm.elements[b1], self.local_povm.elements[b2]
                    )
            elements.append(element)
        return Povm(tuple(elements))

    @property
    def num_outputs(self) -> int:
        return int(self.output_map.shape[2])


@dataclass(frozen=True, eq=False)
class SequentialMeasurement:
    """Two-stage measurement: ``first`` on one system, then ``second[b']`` on the other.

    ``order`` is ``"seq_M_then_B"`` (message first) or ``"seq_B_then_M"`` (Bob's share first).
    """

    first: Povm
    second: tuple[Povm, ...]
    order: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "second", tuple(self.second))
        if self.order not in ("seq_M_then_B", "seq_B_then_M"):
            raise ValueError(f"Unknown sequential order '{self.order}'.")
        if len(self.second) != self.first.num_outcomes:
            raise ValueError("One second-stage POVM is needed per first-stage outcome.")
        _check_povms(
            self.second, self.second[0].dim, self.second[0].num_outcomes, "Second-stage POVM"
        )

    @property
    def measurement_class(self) -> str:
        return self.order

    @property
    def num_outputs(self) -> int:
        return self.second[0].num_outcomes

    def assemble(self, message_dim: int, local_dim: int) -> Povm:
        first_dim, second_dim = (
            (message_dim, local_dim) if self.order == "seq_M_then_B" else (local_dim, message_dim)
        )
        if (self.first.dim, self.second[0].dim) != (first_dim, second_dim):
            raise ValueError("Stage POVM dimensions do not match the message and local systems.")
        elements = []
        for b in range(self.num_outputs):
            element = np.zeros((message_dim * local_dim,) * 2, dtype=np.complex128)
            for b_first, first_element in enumerate(self.first.elements):
                second_element = self.second[b_first].elements[b]
                if self.order == "seq_M_then_B":
                    element += kron(first_element, second_element)
                else:
                    element += kron(second_element, first_element)
            elements.append(element)
        return Povm(tuple(elements))


BobMeasurement = Union[JointMeasurement, ProductMeasurement, SequentialMeasurement]


@dataclass(frozen=True, eq=False)
class QuantumMessageStrategy:
    """Alice applies ``alice_channels[x]`` to her share and sends the output as the message.

    Bob measures ``bob[y]`` on message ⊗ his share; all settings share one measurement class.
    """

    shared_state: DensityState
    alice_channels: tuple[KrausChannel, ...]
    bob: tuple[BobMeasurement, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alice_channels", tuple(self.alice_channels))
        object.__setattr__(self, "bob", tuple(self.bob))
        dim_a, dim_b = _bipartite_dims(self.shared_state)
        if not self.alice_channels or not self.bob:
            raise ValueError("Alice and Bob need at least one operation each.")
        message_dim = self.alice_channels[0].out_dim
        for x, channel in enumerate(self.alice_channels):
            if (channel.in_dim, channel.out_dim) != (dim_a, message_dim):
                raise ValueError(f"Channel {x} maps {channel.in_dim} → {channel.out_dim}.")
        classes = {m.measurement_class for m in self.bob}
        if len(classes) != 1:
            raise ValueError(f"All settings must share one measurement class, got {classes}.")
        povms = tuple(m.assemble(message_dim, dim_b) for m in self.bob)
        _check_povms(povms, message_dim * dim_b, povms[0].num_outcomes, "Bob POVM")
        object.__setattr__(self, "_assembled", povms)

    @property
    def message_dim(self) -> int:
        return self.alice_channels[0].out_dim

    @property
    def measurement_class(self) -> str:
        return self.bob[0].measurement_class

    @property
    def assembled_povms(self) -> tuple[Povm, ...]:
        """Bob's measurements as POVMs on message ⊗ local system."""
        return self._assembled  # type: ignore[attr-defined, no-any-return]

    @property
    def num_inputs(self) -> int:
        return len(self.alice_channels)

    @property
    def num_settings(self) -> int:
        return len(self.bob)

    @property
    def num_outputs(self) -> int:
        return self.assembled_povms[0].num_outcomes


Strategy = Union[
    AdaptiveEAClassicalStrategy,
    NonAdaptiveEAClassicalStrategy,
    PrepareMeasureStrategy,
    QuantumMessageStrategy,
]
