from __future__ import annotations

from dataclasses import dataclass
import re

import numpy as np

from eacomm.core_linalg import povm_element_from_bloch
from eacomm.core_linalg import STRUCTURAL_TOL
from eacomm.optimizer._blocks import BlochStateBlock
from eacomm.optimizer._blocks import PovmBlock
from eacomm.optimizer._blocks import ProjectiveQubitBlock
from eacomm.optimizer._models import Discrete
from eacomm.optimizer._models import EAClassicalModel
from eacomm.optimizer._models import PrepareMeasureModel
from eacomm.optimizer._models import QuantumMessageModel
from eacomm.optimizer._models import Scenario
from eacomm.optimizer._models import StrategyModel
from eacomm.protocol import MEASUREMENT_CLASSES
from eacomm.protocol import Strategy
from eacomm.strategies import QubitElement
from eacomm.strategies import QubitPrepareMeasure
from eacomm.tasks import LinearFunctional


ANSATZ_CLASSES = (
    "unassisted-classical-D",
    "qubit-projective",
    "qubit-povm",
    "ea-bit-adaptive",
    "ea-bit-nonadaptive",
    "ea-trit-adaptive",
    "ea-trit-nonadaptive",
) + tuple(f"quantum-message-{c}" for c in MEASUREMENT_CLASSES)

_CLASSICAL = re.compile(r"^unassisted-classical-(\d+)$")
_EA = re.compile(r"^ea-(bit|trit)-(adaptive|nonadaptive)$")


@dataclass(frozen=True)
class StrategyAnsatz:
    """A strategy class together with the scenario and dimension caps it is searched in.

    Args:
        tag:
            One of :data:`ANSATZ_CLASSES`, with D replaced by the message size for the
            classical class (e.g. ``"unassisted-classical-3"``).
        scenario:
            Input, setting and outcome counts of the functional to be maximized.
        local_dims:
            Dimensions of Alice's and Bob's shares of the entangled state.
        message_dim:
            Dimension of the quantum message.
        base_outcomes:
            Outcomes of Bob's base measurements in non-adaptive classes. Defaults to B.
        num_kraus:
            Number of Kraus operators of Alice's encoding channels.
    """

    tag: str
    scenario: Scenario
    local_dims: tuple[int, int] = (2, 2)
    message_dim: int = 2
    base_outcomes: int | None = None
    num_kraus: int = 2

    def __post_init__(self) -> None:
        if not (
            self.tag in ANSATZ_CLASSES[1:] or _CLASSICAL.match(self.tag) is not None
        ):
            raise ValueError(f"Unknown ansatz class '{self.tag}'. Choose from {ANSATZ_CLASSES}.")
        if min(self.local_dims) < 1 or self.message_dim < 1 or self.num_kraus < 1:
            raise ValueError("Dimensions and the number of Kraus operators must be positive.")

    @classmethod
    def for_functional(cls, tag: str, f: LinearFunctional, **caps: object) -> StrategyAnsatz:
        return cls(tag, Scenario.of(f), **caps)  # type: ignore[arg-type]

    @property
    def message_size(self) -> int | None:
        """Classical message alphabet size, None for quantum and qubit classes."""
        classical = _CLASSICAL.match(self.tag)
        if classical is not None:
            return int(classical.group(1))
        ea = _EA.match(self.tag)
        if ea is not None:
            return 2 if ea.group(1) == "bit" else 3
        return None

    def build_model(self) -> StrategyModel:
        if self.tag in ("qubit-projective", "qubit-povm"):
            return PrepareMeasureModel(self.scenario, projective=self.tag == "qubit-projective")
        classical = _CLASSICAL.match(self.tag)
        if classical is not None:
            return EAClassicalModel(
                self.scenario, int(classical.group(1)), (1, 1), adaptive=True
            )
        ea = _EA.match(self.tag)
        if ea is not None:
            return EAClassicalModel(
                self.scenario,
                self.message_size or 2,
                self.local_dims,
                adaptive=ea.group(2) == "adaptive",
                base_outcomes=self.base_outcomes,
            )
        return QuantumMessageModel(
            self.scenario,
            self.tag[len("quantum-message-") :],
            self.local_dims,
            self.message_dim,
            self.num_kraus,
        )

    def layout(self) -> list[tuple[str, int]]:
        """Block names and parameter counts in vector order."""
        return [(type(block).__name__, block.size) for block in self.build_model().blocks]

    @property
    def num_params(self) -> int:
        return sum(size for _, size in self.layout())

    def check_functional(self, f: LinearFunctional) -> None:
        if Scenario.of(f) != self.scenario:
            raise ValueError(
                f"Functional scenario {Scenario.of(f)} does not match the ansatz {self.scenario}."
            )


def decode(
    ansatz: StrategyAnsatz, params: np.ndarray, discrete: Discrete | None = None
) -> Strategy:
    """Strategy object for a parameter vector.

    ``discrete`` holds the non-continuous choices of the class; defaults are used when it is
    omitted.

    Raises:
        ValueError: The vector length does not match the ansatz layout.
    """
    model = ansatz.build_model()
    params = np.asarray(params, dtype=float)
    if discrete is None:
        discrete = model.default_discrete()
    return model.to_strategy(params, discrete)


def _projective_placement(
    elements: tuple[QubitElement, ...], y: int
) -> tuple[np.ndarray, tuple[int, int]]:
    active = [(b, w, v) for b, (w, v) in enumerate(elements) if w > STRUCTURAL_TOL]
    if len(active) == 1 and abs(active[0][1] - 2.0) < STRUCTURAL_TOL:
        return np.array([0.0, 0.0, 1.0]), (active[0][0], active[0][0])
    if len(active) != 2:
        raise ValueError(f"Setting {y} is not a pair of complementary qubit projectors.")
    (i, wi, vi), (j, _, vj) = active
    d_plus = vi.as_array()
    d_minus = vj.as_array()
    if (
        abs(wi - 1.0) > STRUCTURAL_TOL
        or abs(np.linalg.norm(d_plus) - 1.0) > STRUCTURAL_TOL
        or np.max(np.abs(d_plus + d_minus)) > STRUCTURAL_TOL
    ):
        raise ValueError(f"Setting {y} is not a pair of complementary qubit projectors.")
    return d_plus, (i, j)


def encode(ansatz: StrategyAnsatz, target: QubitPrepareMeasure) -> tuple[np.ndarray, Discrete]:
    """Parameters and discrete choices that :func:`decode` maps back to ``target``.

    Supported for ``qubit-povm`` and ``qubit-projective``; states must be pure.
    """
    if ansatz.tag not in ("qubit-povm", "qubit-projective"):
        raise ValueError(f"encode is only defined for qubit classes, got '{ansatz.tag}'.")
    if target.outcome_counts != ansatz.scenario.outcome_counts:
        raise ValueError("The qubit strategy does not match the ansatz outcome counts.")
    if len(target.states) != ansatz.scenario.num_inputs:
        raise ValueError("The qubit strategy does not match the ansatz input count.")

    state_block = BlochStateBlock()
    parts = []
    for n in target.states:
        if abs(n.norm - 1.0) > STRUCTURAL_TOL:
            raise ValueError("Only pure states can be encoded.")
        parts.append(state_block.encode(povm_element_from_bloch(1.0, n)))

    discrete: Discrete = {}
    if ansatz.tag == "qubit-povm":
        for elements in target.povms:
            block = PovmBlock(2, len(elements))
            stack = np.array([povm_element_from_bloch(w, v) for w, v in elements])
            parts.append(block.encode(stack))
    else:
        placements = []
        for y, elements in enumerate(target.povms):
            direction, placement = _projective_placement(elements, y)
            parts.append(ProjectiveQubitBlock().encode(direction))
            placements.append(placement)
        discrete["placements"] = np.array(placements, dtype=int)
    return np.concatenate(parts), discrete
