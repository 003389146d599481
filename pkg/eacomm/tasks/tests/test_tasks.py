"""Tests for linear functionals and the classical enumeration oracle."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from eacomm._errors import EnumerationLimitError
from eacomm._errors import SchemaError
from eacomm.protocol import Behavior
from eacomm.tasks import classical_bound
from eacomm.tasks import dense_coding_mesd
from eacomm.tasks import deterministic_behavior
from eacomm.tasks import evaluate
from eacomm.tasks import facet_certificate
from eacomm.tasks import facet_functional
from eacomm.tasks import LinearFunctional
from eacomm.tasks import mesd_functional
from eacomm.tasks import mesd_rate
from eacomm.tasks import rac_functional
from eacomm.tasks import separable_mesd_bound


def _random_behavior(rng: np.random.RandomState, dims: tuple[int, int, int]) -> Behavior:
    table = rng.rand(*dims)
    return Behavior(table / table.sum(axis=2, keepdims=True))


class TestFunctionals:
    def test_rac_coefficients(self) -> None:
        f = rac_functional()
        assert f.dims == (4, 2, 2)
        # x = 2 (bits 1, 0): bit 0 is 1, bit 1 is 0.
        assert f.coeffs[2, 0, 1] == 1 / 8
        assert f.coeffs[2, 1, 0] == 1 / 8
        assert f.coeffs[2, 0, 0] == 0.0
        assert f.coeffs.sum() == pytest.approx(1.0)

    def test_rac_on_uniform_behavior(self) -> None:
        assert evaluate(rac_functional(), Behavior(np.full((4, 2, 2), 0.5))) == pytest.approx(0.5)

    def test_facet_on_uniform_behavior(self) -> None:
        table = np.zeros((3, 2, 3))
        table[:, 0, :2] = 0.5
        table[:, 1, :] = 1 / 3
        assert evaluate(facet_functional(), Behavior(table)) == pytest.approx(-1 / 6)

    def test_facet_rejects_weight_on_missing_outcome(self) -> None:
        coeffs = np.zeros((3, 2, 3))
        coeffs[0, 0, 2] = 1.0
        with pytest.raises(ValueError):
            LinearFunctional(coeffs, outcome_counts=(2, 3))

    def test_zero_functional(self) -> None:
        rng = np.random.RandomState(0)
        f = LinearFunctional(np.zeros((3, 2, 2)))
        assert evaluate(f, _random_behavior(rng, (3, 2, 2))) == 0.0

    def test_dimension_mismatch(self) -> None:
        with pytest.raises(ValueError):
            evaluate(rac_functional(), Behavior(np.full((3, 2, 2), 0.5)))

    def test_evaluate_is_linear(self) -> None:
        rng = np.random.RandomState(1)
        f = facet_functional()
        for _ in range(20):
            p = _random_behavior(rng, (3, 2, 3))
            q = _random_behavior(rng, (3, 2, 3))
            weight = rng.rand()
            mixed = p.mix(q, weight)
            expected = weight * evaluate(f, p) + (1 - weight) * evaluate(f, q)
            assert abs(evaluate(f, mixed) - expected) < 1e-12

    def test_json_round_trip(self, tmp_path: Path) -> None:
        path = tmp_path / "facet.json"
        facet_functional().save(path)
        restored = LinearFunctional.from_dict(json.loads(path.read_text()))
        np.testing.assert_array_equal(restored.coeffs, facet_functional().coeffs)
        assert restored.outcome_counts == (2, 3)
        assert restored.name == "facet"

    def test_wrong_schema(self) -> None:
        with pytest.raises(SchemaError):
            LinearFunctional.from_dict({"schema": "other", "coeffs": []})


class TestDiscrimination:
    def test_trivial_task(self) -> None:
        assert mesd_rate(Behavior(np.ones((1, 1, 1)))) == 1.0

    def test_rate_is_diagonal_mean(self) -> None:
        table = np.full((4, 1, 4), 0.25)
        assert mesd_rate(Behavior(table)) == pytest.approx(0.25)
        assert evaluate(mesd_functional(4), Behavior(table)) == pytest.approx(0.25)

    @pytest.mark.parametrize("dims", [(4, 2, 4), (4, 1, 2)])
    def test_rejects_non_discrimination_dims(self, dims: tuple[int, int, int]) -> None:
        with pytest.raises(ValueError):
            mesd_rate(Behavior(np.full(dims, 1.0 / dims[2])))

    def test_reference_rates(self) -> None:
        assert dense_coding_mesd(2, 4) == 1.0
        assert separable_mesd_bound(2, 4) == 0.5
        assert separable_mesd_bound(3, 2) == 1.0


class TestClassicalBound:
    @pytest.mark.parametrize(
        "message_size, expected", [(1, 0.5), (2, 0.75), (3, 0.875), (4, 1.0)]
    )
    def test_rac(self, message_size: int, expected: float) -> None:
        assert classical_bound(rac_functional(), message_size).value == pytest.approx(expected)

    def test_facet_bit(self) -> None:
        assert classical_bound(facet_functional(), 2).value == pytest.approx(2.0)

    def test_optimal_strategy_reproduces_value(self) -> None:
        f = facet_functional()
        bound = classical_bound(f, 2)
        behavior = bound.behavior(3)
        assert evaluate(f, behavior) == pytest.approx(bound.value)
        assert np.all(behavior.table[:, 0, 2] == 0.0)

    def test_monotone_in_message_size(self) -> None:
        rng = np.random.RandomState(2)
        for _ in range(5):
            f = LinearFunctional(rng.randn(3, 2, 2))
            values = [classical_bound(f, d).value for d in range(1, 4)]
            assert values == sorted(values)

    def test_bound_dominates_random_deterministic_strategies(self) -> None:
        rng = np.random.RandomState(3)
        f = rac_functional()
        bound = classical_bound(f, 2).value
        for _ in range(50):
            encoding = tuple(rng.randint(2, size=4))
            decoding = rng.randint(2, size=(2, 2))
            assert evaluate(f, deterministic_behavior(encoding, decoding, 2)) <= bound + 1e-12

    def test_enumeration_guard(self) -> None:
        with pytest.raises(EnumerationLimitError):
            classical_bound(rac_functional(num_bits=3), 4)

    def test_rejects_empty_alphabet(self) -> None:
        with pytest.raises(ValueError):
            classical_bound(rac_functional(), 0)


def test_facet_certificate() -> None:
    certificate = facet_certificate(facet_functional(), 2)
    assert certificate.bound == pytest.approx(2.0)
    assert certificate.is_facet
    assert certificate.face_dim == certificate.polytope_dim - 1
    assert certificate.num_tight >= 6
