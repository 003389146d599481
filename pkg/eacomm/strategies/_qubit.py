from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Sequence

import numpy as np

from eacomm._errors import InvariantViolation
from eacomm.core_linalg import BlochVector
from eacomm.core_linalg import observable_povm
from eacomm.core_linalg import phi_plus
from eacomm.core_linalg import Povm
from eacomm.core_linalg import povm_element_from_bloch
from eacomm.core_linalg import qubit_from_bloch
from eacomm.core_linalg import STRUCTURAL_TOL
from eacomm.protocol import AdaptiveEAClassicalStrategy
from eacomm.protocol import Behavior
from eacomm.protocol import PrepareMeasureStrategy


QubitElement = tuple[float, BlochVector]

_ZERO = BlochVector(0.0, 0.0, 0.0)


def _check_qubit_povm(elements: Sequence[QubitElement], y: int) -> None:
    total_weight = sum(weight for weight, _ in elements)
    total_vector = sum((v.as_array() for _, v in elements), np.zeros(3))
    deviation = max(abs(total_weight - 2.0), float(np.max(np.abs(total_vector))))
    if deviation > STRUCTURAL_TOL:
        raise InvariantViolation(
            f"Measurement {y} needs weights summing to 2 and vectors summing to 0", deviation
        )
    for b, (weight, v) in enumerate(elements):
        if weight < v.norm - STRUCTURAL_TOL:
            raise InvariantViolation(
                f"Element {b} of measurement {y} has weight below |v|", v.norm - weight
            )


@dataclass(frozen=True)
class QubitPrepareMeasure:
    """Qubit prepare-and-measure data in Bloch form.

    Alice sends ½(𝟙 + n_x·σ). Bob's element for outcome b of setting y is ½(w·𝟙 + v·σ),
    given as the pair (w, v). Settings may have different numbers of outcomes.
    """

    states: tuple[BlochVector, ...]
    povms: tuple[tuple[QubitElement, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "povms", tuple(tuple(p) for p in self.povms))
        if not self.states or not self.povms:
            raise ValueError("At least one state and one measurement are required.")
        for x, n in enumerate(self.states):
            if n.norm > 1.0 + STRUCTURAL_TOL:
                raise InvariantViolation(f"State {x} lies outside the Bloch ball", n.norm - 1.0)
        for y, elements in enumerate(self.povms):
            _check_qubit_povm(elements, y)

    @property
    def num_outputs(self) -> int:
        return max(len(elements) for elements in self.povms)

    @property
    def outcome_counts(self) -> tuple[int, ...]:
        return tuple(len(elements) for elements in self.povms)

    def behavior(self) -> Behavior:
        """p(b|x,y) = ½(w_by + n_x·v_by), zero on outcomes a setting lacks."""
        table = np.zeros((len(self.states), len(self.povms), self.num_outputs))
        for x, n in enumerate(self.states):
            for y, elements in enumerate(self.povms):
                for b, (weight, v) in enumerate(elements):
                    table[x, y, b] = 0.5 * (weight + float(n.as_array() @ v.as_array()))
        return Behavior(table)

    def to_strategy(self) -> PrepareMeasureStrategy:
        povms = tuple(
            Povm(tuple(povm_element_from_bloch(w, v) for w, v in elements)).padded(
                self.num_outputs
            )
            for elements in self.povms
        )
        return PrepareMeasureStrategy(tuple(qubit_from_bloch(n) for n in self.states), povms)


def _mirrored(n: BlochVector) -> BlochVector:
    return BlochVector(n.x, -n.y, n.z)


def simulate_qubit_pm(
    states: Sequence[BlochVector], povms: Sequence[Sequence[QubitElement]]
) -> AdaptiveEAClassicalStrategy:
    """One shared ebit plus one classical bit reproducing a qubit prepare-and-measure behavior.

    Alice measures her half of |φ⁺⟩ along (n_X, −n_Y, n_Z), which steers Bob's half to ±n_x,
    and sends the outcome m. Bob measures ½(w·𝟙 ± v·σ), the sign flipped when m = 1.

    Raises:
        ValueError: A state is not pure.
        InvariantViolation: The measurement data is not a valid qubit POVM.
    """
    target = QubitPrepareMeasure(tuple(states), tuple(tuple(p) for p in povms))
    for x, n in enumerate(target.states):
        if abs(n.norm - 1.0) > STRUCTURAL_TOL:
            raise ValueError(f"State {x} must be pure, got |n| = {n.norm}.")
    alice = tuple(observable_povm(_mirrored(n)) for n in target.states)
    bob = []
    for elements in target.povms:
        row = []
        for sign in (1.0, -1.0):
            row.append(
                Povm(
                    tuple(povm_element_from_bloch(w, v.scaled(sign)) for w, v in elements)
                ).padded(target.num_outputs)
            )
        bob.append(tuple(row))
    return AdaptiveEAClassicalStrategy(phi_plus(), alice, tuple(bob))


def facet_qubit_povm_strategy() -> QubitPrepareMeasure:
    """Trine-like states with a non-projective three-outcome measurement reaching F = 9/4."""
    angle = math.atan(4.0 * math.sqrt(3.0))
    theta_plus, theta_minus = -math.pi + angle, -math.pi - angle
    states = (
        BlochVector(1.0, 0.0, 0.0),
        BlochVector(-0.5, 0.0, math.sqrt(3.0) / 2.0),
        BlochVector(-0.5, 0.0, -math.sqrt(3.0) / 2.0),
    )
    first = ((1.0, BlochVector(-1.0, 0.0, 0.0)), (1.0, BlochVector(1.0, 0.0, 0.0)))
    second = (
        (7 / 8, BlochVector(7 / 8 * math.cos(theta_plus), 0.0, 7 / 8 * math.sin(theta_plus))),
        (7 / 8, BlochVector(7 / 8 * math.cos(theta_minus), 0.0, 7 / 8 * math.sin(theta_minus))),
        (1 / 4, BlochVector(1 / 4, 0.0, 0.0)),
    )
    return QubitPrepareMeasure(states, (first, second))


FACET_OUTCOME_TYPES = ((0, 1, None), (0, None, 1), (None, 0, 1))


def facet_qubit_projective_strategy(outcome_type: int = 0) -> QubitPrepareMeasure:
    """Projective qubit strategy reaching F = √5.

    ``outcome_type`` places the two projectors of the second measurement on outcomes
    {1, 2}, {1, 3} or {2, 3} (0, 1 or 2); the unused outcome gets the zero element.
    Only the first placement saturates √5.
    """
    if outcome_type not in range(len(FACET_OUTCOME_TYPES)):
        raise ValueError(f"outcome_type must be 0, 1 or 2, got {outcome_type}.")
    v1 = BlochVector(1.0, 0.0, 0.0)
    v2 = BlochVector(0.0, 0.0, 1.0)
    root5 = math.sqrt(5.0)
    states = (
        BlochVector(-1.0, 0.0, 0.0),
        BlochVector(1.0 / root5, 0.0, -2.0 / root5),
        BlochVector(1.0 / root5, 0.0, 2.0 / root5),
    )
    projectors = ((1.0, v2), (1.0, v2.scaled(-1.0)))
    second = tuple(
        (0.0, _ZERO) if slot is None else projectors[slot]
        for slot in FACET_OUTCOME_TYPES[outcome_type]
    )
    return QubitPrepareMeasure(states, (((1.0, v1), (1.0, v1.scaled(-1.0))), second))


def unassisted_qubit_rac() -> QubitPrepareMeasure:
    """2→1 RAC with a qubit: states ((−1)^{x2}, 0, (−1)^{x1})/√2, Bob measures Z or X."""
    c = 1.0 / math.sqrt(2.0)
    states = tuple(
        BlochVector((-1.0) ** (x & 1) * c, 0.0, (-1.0) ** (x >> 1) * c) for x in range(4)
    )
    z = BlochVector(0.0, 0.0, 1.0)
    x_axis = BlochVector(1.0, 0.0, 0.0)
    return QubitPrepareMeasure(
        states,
        (
            ((1.0, z), (1.0, z.scaled(-1.0))),
            ((1.0, x_axis), (1.0, x_axis.scaled(-1.0))),
        ),
    )
