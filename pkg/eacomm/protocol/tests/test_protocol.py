"""Tests for strategies, behaviors and the adaptivity check."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from eacomm._errors import InvariantViolation
from eacomm._errors import SchemaError
from eacomm.core_linalg import DensityState
from eacomm.core_linalg import KrausChannel
from eacomm.core_linalg import Povm
from eacomm.core_linalg import random_channel
from eacomm.core_linalg import random_density_state
from eacomm.core_linalg import random_povm
from eacomm.core_linalg import random_unitary
from eacomm.protocol import AdaptiveEAClassicalStrategy
from eacomm.protocol import Behavior
from eacomm.protocol import behavior_of
from eacomm.protocol import behavior_of_adaptive
from eacomm.protocol import behavior_of_nonadaptive
from eacomm.protocol import behavior_of_quantum
from eacomm.protocol import check_nonadaptive
from eacomm.protocol import JointMeasurement
from eacomm.protocol import lift_to_adaptive
from eacomm.protocol import load_strategy
from eacomm.protocol import NonAdaptiveEAClassicalStrategy
from eacomm.protocol import ProductMeasurement
from eacomm.protocol import QuantumMessageStrategy
from eacomm.protocol import save_strategy
from eacomm.protocol import SequentialMeasurement
from eacomm.protocol import strategy_from_dict
from eacomm.protocol import strategy_to_dict


def _projective_povm(dim: int, rng: np.random.RandomState) -> Povm:
    basis = random_unitary(dim, rng)
    return Povm(tuple(np.outer(basis[:, k], basis[:, k].conj()) for k in range(dim)))


def _random_nonadaptive(
    rng: np.random.RandomState,
    projective: bool,
    num_inputs: int = 3,
    message_size: int = 3,
    num_settings: int = 2,
    num_outputs: int = 2,
) -> NonAdaptiveEAClassicalStrategy:
    state = random_density_state([2, 2], rng)
    alice = tuple(random_povm(2, message_size, rng) for _ in range(num_inputs))
    if projective:
        base = tuple(_projective_povm(2, rng) for _ in range(num_settings))
    else:
        base = tuple(random_povm(2, 3, rng) for _ in range(num_settings))
    table = rng.randint(num_outputs, size=(num_settings, message_size, base[0].num_outcomes))
    return NonAdaptiveEAClassicalStrategy(state, alice, base, table, num_outputs)


class TestBehavior:
    """The conditional distribution container."""

    def test_rejects_unnormalized_table(self) -> None:
        with pytest.raises(InvariantViolation):
            Behavior(np.full((1, 1, 2), 0.6))

    def test_max_violation(self) -> None:
        behavior = Behavior(np.full((1, 1, 2), 0.5 + 1e-10))
        assert behavior.max_violation() == pytest.approx(2e-10, abs=1e-12)
        assert Behavior(np.full((2, 2, 2), 0.5)).max_violation() == 0.0

    def test_csv_uses_one_based_labels(self, tmp_path: Path) -> None:
        table = np.array([[[0.25, 0.75]], [[1.0, 0.0]]])
        path = tmp_path / "behavior.csv"
        Behavior(table).to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "x,y,b,p"
        assert lines[1] == "1,1,1,0.25"
        np.testing.assert_array_equal(Behavior.from_csv(path).table, table)

    def test_csv_without_columns(self, tmp_path: Path) -> None:
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(SchemaError):
            Behavior.from_csv(path)


class TestAdaptive:
    """Adaptive entanglement-assisted classical strategies."""

    def test_single_outcome_bob(self) -> None:
        """Bob's trivial measurement always answers the first outcome."""
        rng = np.random.RandomState(0)
        identity = Povm((np.eye(2),))
        strategy = AdaptiveEAClassicalStrategy(
            random_density_state([2, 2], rng),
            tuple(random_povm(2, 2, rng) for _ in range(3)),
            ((identity, identity), (identity, identity)),
        )
        np.testing.assert_allclose(behavior_of_adaptive(strategy).table, 1.0, atol=1e-12)

    def test_linear_in_shared_state(self) -> None:
        rng = np.random.RandomState(1)
        for _ in range(10):
            rho = random_density_state([2, 2], rng)
            sigma = random_density_state([2, 2], rng)
            alice = tuple(random_povm(2, 2, rng) for _ in range(4))
            bob = tuple(tuple(random_povm(2, 2, rng) for _ in range(2)) for _ in range(2))
            weight = rng.uniform()
            mixed = AdaptiveEAClassicalStrategy(rho.mix(sigma, weight), alice, bob)
            expected = behavior_of_adaptive(AdaptiveEAClassicalStrategy(rho, alice, bob)).mix(
                behavior_of_adaptive(AdaptiveEAClassicalStrategy(sigma, alice, bob)), weight
            )
            np.testing.assert_allclose(
                behavior_of_adaptive(mixed).table, expected.table, atol=1e-12
            )

    def test_mismatched_table(self) -> None:
        rng = np.random.RandomState(2)
        with pytest.raises(ValueError, match="entries"):
            AdaptiveEAClassicalStrategy(
                random_density_state([2, 2], rng),
                (random_povm(2, 3, rng),),
                ((random_povm(2, 2, rng),),),
            )


class TestNonAdaptive:
    """Base measurement plus post-processing."""

    def test_lift_preserves_behavior(self) -> None:
        """Evaluating in either form gives the same table."""
        rng = np.random.RandomState(3)
        for i in range(100):
            strategy = _random_nonadaptive(rng, projective=i % 2 == 0)
            np.testing.assert_allclose(
                behavior_of_nonadaptive(strategy).table,
                behavior_of_adaptive(lift_to_adaptive(strategy)).table,
                atol=1e-12,
            )

    def test_lift_of_projective_strategy_commutes(self) -> None:
        rng = np.random.RandomState(4)
        for _ in range(50):
            report = check_nonadaptive(lift_to_adaptive(_random_nonadaptive(rng, True)), tol=1e-10)
            assert report.is_nonadaptive
            assert report.verdict == "NON-ADAPTIVE"

    def test_constant_postprocessing(self) -> None:
        rng = np.random.RandomState(5)
        strategy = _random_nonadaptive(rng, False)
        constant = NonAdaptiveEAClassicalStrategy(
            strategy.shared_state,
            strategy.alice,
            strategy.bob_base,
            np.ones_like(strategy.postprocess),
            2,
        )
        for row in lift_to_adaptive(constant).bob:
            for povm in row:
                np.testing.assert_allclose(povm.elements[0], 0.0, atol=1e-15)
                np.testing.assert_allclose(povm.elements[1], np.eye(2), atol=1e-12)

    def test_message_independent_postprocessing_signals_nothing(self) -> None:
        rng = np.random.RandomState(6)
        strategy = _random_nonadaptive(rng, False)
        table = np.repeat(strategy.postprocess[:, :1, :], strategy.message_size, axis=1)
        blind = NonAdaptiveEAClassicalStrategy(
            strategy.shared_state, strategy.alice, strategy.bob_base, table, 2
        )
        behavior = behavior_of_nonadaptive(blind).table
        for x in range(1, behavior.shape[0]):
            np.testing.assert_allclose(behavior[x], behavior[0], atol=1e-12)

    def test_postprocessing_range(self) -> None:
        rng = np.random.RandomState(7)
        strategy = _random_nonadaptive(rng, True)
        with pytest.raises(ValueError, match="postprocess values"):
            NonAdaptiveEAClassicalStrategy(
                strategy.shared_state,
                strategy.alice,
                strategy.bob_base,
                strategy.postprocess + 5,
                2,
            )


class TestCheckNonAdaptive:
    """Commutation test on Bob's measurement family."""

    def test_random_adaptive_strategy_fails(self) -> None:
        rng = np.random.RandomState(8)
        strategy = AdaptiveEAClassicalStrategy(
            random_density_state([2, 2], rng),
            (random_povm(2, 2, rng),),
            ((_projective_povm(2, rng), _projective_povm(2, rng)),),
        )
        report = check_nonadaptive(strategy)
        assert not report
        assert report.max_commutator_norm > 1e-3
        assert report.witness is not None and report.witness[0] == 0


class TestQuantumMessage:
    """Quantum message strategies and their measurement classes."""

    def _state_and_channels(
        self, rng: np.random.RandomState, num_inputs: int = 4
    ) -> tuple[DensityState, tuple[KrausChannel, ...]]:
        state = random_density_state([2, 2], rng)
        channels = tuple(random_channel(2, 2, rng) for _ in range(num_inputs))
        return state, channels

    def test_equal_channels_signal_nothing(self) -> None:
        rng = np.random.RandomState(9)
        state, channels = self._state_and_channels(rng)
        strategy = QuantumMessageStrategy(
            state, (channels[0],) * 4, (JointMeasurement(random_povm(4, 4, rng)),)
        )
        table = behavior_of_quantum(strategy).table
        for x in range(4):
            np.testing.assert_allclose(table[x], table[0], atol=1e-12)

    @pytest.mark.parametrize("order", ["seq_M_then_B", "seq_B_then_M"])
    def test_sequential_assembly_is_complete(self, order: str) -> None:
        rng = np.random.RandomState(10)
        state, channels = self._state_and_channels(rng)
        measurement = SequentialMeasurement(
            random_povm(2, 3, rng), tuple(random_povm(2, 4, rng) for _ in range(3)), order
        )
        strategy = QuantumMessageStrategy(state, channels, (measurement,))
        povm = strategy.assembled_povms[0]
        np.testing.assert_allclose(sum(povm.elements), np.eye(4), atol=1e-10)
        assert strategy.measurement_class == order
        assert behavior_of(strategy).dims == (4, 1, 4)

    def test_product_assembly(self) -> None:
        rng = np.random.RandomState(11)
        state, channels = self._state_and_channels(rng)
        first, second = random_povm(2, 2, rng), random_povm(2, 2, rng)
        measurement = ProductMeasurement.deterministic(first, second, [[0, 1], [1, 0]], 2)
        povm = measurement.assemble(2, 2)
        expected = np.kron(first.elements[0], second.elements[1]) + np.kron(
            first.elements[1], second.elements[0]
        )
        np.testing.assert_allclose(povm.elements[1], expected, atol=1e-12)
        strategy = QuantumMessageStrategy(state, channels, (measurement,))
        assert strategy.measurement_class == "product"

    def test_mixed_classes_are_rejected(self) -> None:
        rng = np.random.RandomState(12)
        state, channels = self._state_and_channels(rng)
        product = ProductMeasurement.deterministic(
            random_povm(2, 2, rng), random_povm(2, 2, rng), [[0, 1], [1, 0]], 2
        )
        with pytest.raises(ValueError, match="one measurement class"):
            QuantumMessageStrategy(
                state, channels, (product, JointMeasurement(random_povm(4, 2, rng)))
            )


class TestSerialization:
    """Strategy JSON documents."""

    def test_round_trip_keeps_behavior(self, tmp_path: Path) -> None:
        rng = np.random.RandomState(13)
        strategy = _random_nonadaptive(rng, True)
        path = tmp_path / "strategy.json"
        save_strategy(strategy, path)
        restored = load_strategy(path)
        assert isinstance(restored, NonAdaptiveEAClassicalStrategy)
        np.testing.assert_allclose(
            behavior_of(restored).table, behavior_of(strategy).table, atol=1e-15
        )

    def test_quantum_round_trip(self) -> None:
        rng = np.random.RandomState(14)
        measurement = SequentialMeasurement(
            random_povm(2, 2, rng),
            (random_povm(2, 2, rng), random_povm(2, 2, rng)),
            "seq_B_then_M",
        )
        strategy = QuantumMessageStrategy(
            random_density_state([2, 2], rng),
            (random_channel(2, 2, rng), random_channel(2, 2, rng)),
            (measurement,),
        )
        document = json.loads(json.dumps(strategy_to_dict(strategy)))
        assert document["kind"] == "quantum-message"
        restored = strategy_from_dict(document)
        np.testing.assert_allclose(
            behavior_of(restored).table, behavior_of(strategy).table, atol=1e-15
        )

    def test_wrong_schema(self) -> None:
        with pytest.raises(SchemaError, match="schema"):
            strategy_from_dict({"schema": "other/v0", "kind": "prepare-measure"})

    def test_unknown_kind(self) -> None:
        with pytest.raises(SchemaError, match="kind"):
            strategy_from_dict({"schema": "eacomm/strategy/v1", "kind": "telepathy"})

    def test_malformed_json(self, tmp_path: Path) -> None:
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(SchemaError):
            load_strategy(path)

    def test_invalid_povm_in_document(self) -> None:
        rng = np.random.RandomState(15)
        document = strategy_to_dict(_random_nonadaptive(rng, True))
        document["bob_base"][0]["elements"][0][0][0] = [5.0, 0.0]
        with pytest.raises(InvariantViolation):
            strategy_from_dict(document)
