"""Every explicit construction reproduces its claimed value."""

from __future__ import annotations

import math

import numpy as np
import pytest

from eacomm.core_linalg import bloch_components
from eacomm.core_linalg import BlochVector
from eacomm.core_linalg import is_projector
from eacomm.core_linalg import random_channel
from eacomm.core_linalg import random_density_state
from eacomm.core_linalg import random_povm
from eacomm.protocol import behavior_of
from eacomm.protocol import check_nonadaptive
from eacomm.protocol import lift_to_adaptive
from eacomm.protocol import ProductMeasurement
from eacomm.protocol import QuantumMessageStrategy
from eacomm.protocol import SequentialMeasurement
from eacomm.strategies import adaptive_ea_trit_rac
from eacomm.strategies import build_strategy
from eacomm.strategies import chsh_ea_bit_rac
from eacomm.strategies import dense_coding_strategy
from eacomm.strategies import facet_qubit_povm_strategy
from eacomm.strategies import facet_qubit_projective_strategy
from eacomm.strategies import na_ea_trit_rac
from eacomm.strategies import na_ea_trit_value
from eacomm.strategies import optimal_tilt
from eacomm.strategies import QubitPrepareMeasure
from eacomm.strategies import simulate_qubit_pm
from eacomm.strategies import stochastic_dense_coding_rac
from eacomm.strategies import STRATEGY_BUILDERS
from eacomm.strategies import unassisted_qubit_rac
from eacomm.tasks import evaluate
from eacomm.tasks import facet_functional
from eacomm.tasks import mesd_rate
from eacomm.tasks import rac_functional


EA_BIT_RAC = (1 + 1 / math.sqrt(2)) / 2
ADAPTIVE_TRIT_RAC = (3 + 1 / math.sqrt(2)) / 4
NONADAPTIVE_TRIT_NPA = 0.9082


def _rac(strategy: object) -> float:
    return evaluate(rac_functional(), behavior_of(strategy))  # type: ignore[arg-type]


def _random_unit(rng: np.random.RandomState) -> BlochVector:
    v = rng.randn(3)
    return BlochVector.from_array(v / np.linalg.norm(v))


def _random_qubit_pm(rng: np.random.RandomState) -> QubitPrepareMeasure:
    states = tuple(_random_unit(rng) for _ in range(rng.randint(2, 5)))
    povms = []
    for _ in range(rng.randint(1, 4)):
        povm = random_povm(2, rng.randint(2, 5), rng)
        elements = []
        for element in povm.elements:
            weight, vector = bloch_components(element)
            elements.append((weight, BlochVector.from_array(vector)))
        povms.append(tuple(elements))
    return QubitPrepareMeasure(states, tuple(povms))


def _random_projective_facet(rng: np.random.RandomState) -> QubitPrepareMeasure:
    v1, v2 = _random_unit(rng), _random_unit(rng)
    zero = (0.0, BlochVector(0.0, 0.0, 0.0))
    projectors = [(1.0, v2), (1.0, v2.scaled(-1.0))]
    second = projectors + [zero]
    order = rng.permutation(3)
    return QubitPrepareMeasure(
        tuple(_random_unit(rng) for _ in range(3)),
        (((1.0, v1), (1.0, v1.scaled(-1.0))), tuple(second[k] for k in order)),
    )


class TestEABitRac:
    """CHSH-type protocol with one ebit and one bit."""

    def test_value(self) -> None:
        assert _rac(chsh_ea_bit_rac()) == pytest.approx(EA_BIT_RAC, abs=1e-10)

    def test_conditional_distribution(self) -> None:
        p = behavior_of(chsh_ea_bit_rac())
        assert p.probability(0, 0, 0) == pytest.approx(math.cos(math.pi / 8) ** 2, abs=1e-12)

    def test_lift_is_nonadaptive(self) -> None:
        assert check_nonadaptive(lift_to_adaptive(chsh_ea_bit_rac()))

    def test_matches_unassisted_qubit(self) -> None:
        qubit = unassisted_qubit_rac()
        assert evaluate(rac_functional(), qubit.behavior()) == pytest.approx(EA_BIT_RAC)
        assert _rac(qubit.to_strategy()) == pytest.approx(EA_BIT_RAC)

    def test_antipodal_states_give_complementary_answers(self) -> None:
        p = unassisted_qubit_rac().behavior()
        for x in range(4):
            for y in range(2):
                assert p.probability(x, y, 0) + p.probability(3 - x, y, 0) == pytest.approx(1.0)


class TestTritRac:
    """Trit messages with and without adaptive measurements."""

    def test_quarter_tilt(self) -> None:
        expected = (5 + 3 * math.sqrt(2) / 2) / 8
        assert _rac(na_ea_trit_rac(math.pi / 4)) == pytest.approx(expected, abs=1e-10)

    def test_optimal_tilt(self) -> None:
        assert math.cos(optimal_tilt()) == pytest.approx(1 / math.sqrt(5))
        assert _rac(na_ea_trit_rac()) == pytest.approx((5 + math.sqrt(5)) / 8, abs=1e-10)

    def test_closed_form_matches_evaluation(self) -> None:
        rng = np.random.RandomState(0)
        for theta in rng.uniform(0.01, math.pi / 2 - 0.01, size=20):
            assert abs(_rac(na_ea_trit_rac(theta)) - na_ea_trit_value(theta)) < 1e-12

    @pytest.mark.parametrize("theta", [0.0, math.pi / 2, -0.3])
    def test_rejects_tilt_outside_range(self, theta: float) -> None:
        with pytest.raises(ValueError):
            na_ea_trit_rac(theta)

    def test_nonadaptive_lift_passes(self) -> None:
        assert check_nonadaptive(lift_to_adaptive(na_ea_trit_rac()))

    def test_adaptive_value(self) -> None:
        assert _rac(adaptive_ea_trit_rac()) == pytest.approx(ADAPTIVE_TRIT_RAC, abs=1e-10)
        assert _rac(adaptive_ea_trit_rac()) > NONADAPTIVE_TRIT_NPA

    def test_adaptive_is_detected(self) -> None:
        report = check_nonadaptive(adaptive_ea_trit_rac())
        assert not report
        assert report.verdict == "ADAPTIVE"
        assert report.max_commutator_norm > 0.1

    def test_adaptive_dominates_every_tilt(self) -> None:
        thetas = np.linspace(0.001, math.pi / 2 - 0.001, 500)
        best_nonadaptive = max(na_ea_trit_value(t) for t in thetas)
        assert ADAPTIVE_TRIT_RAC - best_nonadaptive >= 0.022


class TestQubitSimulation:
    """One ebit and one bit reproduce qubit prepare-and-measure behaviors."""

    def test_random_instances_are_exact(self) -> None:
        rng = np.random.RandomState(1)
        for _ in range(200):
            target = _random_qubit_pm(rng)
            simulated = behavior_of(simulate_qubit_pm(target.states, target.povms))
            assert np.max(np.abs(simulated.table - target.behavior().table)) < 1e-10

    def test_direct_born_rule_matches_density_matrices(self) -> None:
        rng = np.random.RandomState(2)
        for _ in range(20):
            target = _random_qubit_pm(rng)
            np.testing.assert_allclose(
                behavior_of(target.to_strategy()).table, target.behavior().table, atol=1e-12
            )

    def test_facet_povm_simulation(self) -> None:
        target = facet_qubit_povm_strategy()
        strategy = simulate_qubit_pm(target.states, target.povms)
        assert evaluate(facet_functional(), behavior_of(strategy)) == pytest.approx(2.25)

    def test_projective_targets_stay_nonadaptive(self) -> None:
        target = facet_qubit_projective_strategy()
        assert check_nonadaptive(simulate_qubit_pm(target.states, target.povms))

    def test_rejects_mixed_states(self) -> None:
        target = unassisted_qubit_rac()
        with pytest.raises(ValueError):
            simulate_qubit_pm([BlochVector(0.5, 0.0, 0.0)], target.povms)

    def test_rejects_incomplete_measurement(self) -> None:
        v = BlochVector(0.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            simulate_qubit_pm([v], [[(1.0, v), (0.5, v.scaled(-1.0))]])


class TestFacet:
    """The facet correlation function on qubit strategies."""

    def test_povm_value(self) -> None:
        target = facet_qubit_povm_strategy()
        assert evaluate(facet_functional(), target.behavior()) == pytest.approx(2.25, abs=1e-10)
        strategy = target.to_strategy()
        assert evaluate(facet_functional(), behavior_of(strategy)) == pytest.approx(2.25)

    def test_povm_completeness(self) -> None:
        _, second = facet_qubit_povm_strategy().povms
        assert sum(w for w, _ in second) == pytest.approx(2.0)
        assert [w for w, _ in second] == pytest.approx([7 / 8, 7 / 8, 1 / 4])
        np.testing.assert_allclose(sum(v.as_array() for _, v in second), 0.0, atol=1e-12)

    def test_projective_value(self) -> None:
        target = facet_qubit_projective_strategy()
        value = evaluate(facet_functional(), target.behavior())
        assert value == pytest.approx(math.sqrt(5), abs=1e-10)
        assert value < 2.25

    def test_projective_elements_are_idempotent(self) -> None:
        for povm in facet_qubit_projective_strategy().to_strategy().povms:
            assert all(is_projector(e) for e in povm.elements)

    @pytest.mark.parametrize("outcome_type", [1, 2])
    def test_other_placements_stay_below_bound(self, outcome_type: int) -> None:
        target = facet_qubit_projective_strategy(outcome_type)
        assert evaluate(facet_functional(), target.behavior()) <= math.sqrt(5) + 1e-12

    def test_random_projective_strategies_stay_below_bound(self) -> None:
        rng = np.random.RandomState(3)
        f = facet_functional()
        worst = max(evaluate(f, _random_projective_facet(rng).behavior()) for _ in range(10_000))
        assert worst <= math.sqrt(5) + 1e-9


class TestDenseCoding:
    """Quantum messages assisted by entanglement."""

    @pytest.mark.parametrize("dim", [2, 3])
    def test_joint_decoding_is_perfect(self, dim: int) -> None:
        strategy = dense_coding_strategy(dim)
        assert strategy.measurement_class == "joint"
        assert strategy.num_inputs == dim**2
        assert mesd_rate(behavior_of(strategy)) == pytest.approx(1.0)

    def test_product_decoding_halves_the_rate(self) -> None:
        strategy = dense_coding_strategy(2, "product")
        assert mesd_rate(behavior_of(strategy)) == pytest.approx(0.5)

    def test_unsupported_arguments(self) -> None:
        with pytest.raises(ValueError):
            dense_coding_strategy(1)
        with pytest.raises(ValueError):
            dense_coding_strategy(3, "product")
        with pytest.raises(ValueError):
            dense_coding_strategy(2, "seq_M_then_B")

    def test_separable_measurements_respect_bound(self) -> None:
        rng = np.random.RandomState(4)
        for trial in range(1000):
            state = random_density_state([2, 2], rng)
            channels = tuple(random_channel(2, 2, rng) for _ in range(4))
            if trial % 2 == 0:
                output_map = rng.rand(3, 3, 4)
                output_map /= output_map.sum(axis=2, keepdims=True)
                bob = ProductMeasurement(
                    random_povm(2, 3, rng), random_povm(2, 3, rng), output_map
                )
            else:
                order = "seq_M_then_B" if trial % 4 == 1 else "seq_B_then_M"
                second = tuple(random_povm(2, 4, rng) for _ in range(2))
                bob = SequentialMeasurement(random_povm(2, 2, rng), second, order)
            strategy = QuantumMessageStrategy(state, channels, (bob,))
            assert mesd_rate(behavior_of(strategy)) <= 0.5 + 1e-9

    def test_stochastic_dense_coding_rac(self) -> None:
        strategy = stochastic_dense_coding_rac()
        assert strategy.measurement_class == "product"
        assert _rac(strategy) == pytest.approx(1.0)
        assert _rac(strategy) > EA_BIT_RAC

    def test_stochastic_dense_coding_uses_rank_one_factors(self) -> None:
        for measurement in stochastic_dense_coding_rac().bob:
            assert isinstance(measurement, ProductMeasurement)
            for povm in (measurement.message_povm, measurement.local_povm):
                assert all(np.linalg.matrix_rank(e) == 1 for e in povm.elements)


class TestRegistry:
    @pytest.mark.parametrize("name", sorted(STRATEGY_BUILDERS))
    def test_every_builder_yields_a_behavior(self, name: str) -> None:
        behavior_of(build_strategy(name))

    def test_options_are_forwarded(self) -> None:
        strategy = build_strategy("na-ea-trit-rac", theta=math.pi / 4, dim=None)
        assert _rac(strategy) == pytest.approx(na_ea_trit_value(math.pi / 4))

    def test_unknown_name(self) -> None:
        with pytest.raises(ValueError):
            build_strategy("teleportation")
