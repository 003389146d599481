from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from eacomm._errors import SchemaError
from eacomm.core_linalg import channel_from_json
from eacomm.core_linalg import channel_to_json
from eacomm.core_linalg import povm_from_json
from eacomm.core_linalg import povm_to_json
from eacomm.core_linalg import state_from_json
from eacomm.core_linalg import state_to_json
from eacomm.protocol._strategy import AdaptiveEAClassicalStrategy
from eacomm.protocol._strategy import BobMeasurement
from eacomm.protocol._strategy import JointMeasurement
from eacomm.protocol._strategy import NonAdaptiveEAClassicalStrategy
from eacomm.protocol._strategy import PrepareMeasureStrategy
from eacomm.protocol._strategy import ProductMeasurement
from eacomm.protocol._strategy import QuantumMessageStrategy
from eacomm.protocol._strategy import SequentialMeasurement
from eacomm.protocol._strategy import Strategy


STRATEGY_SCHEMA = "eacomm/strategy/v1"

KIND_ADAPTIVE = "adaptive-ea-classical"
KIND_NONADAPTIVE = "nonadaptive-ea-classical"
KIND_QUANTUM = "quantum-message"
KIND_PREPARE_MEASURE = "prepare-measure"


def _measurement_to_json(measurement: BobMeasurement) -> dict[str, Any]:
    if isinstance(measurement, JointMeasurement):
        return {"class": "joint", "povm": povm_to_json(measurement.povm)}
    if isinstance(measurement, ProductMeasurement):
        return {
            "class": "product",
            "message_povm": povm_to_json(measurement.message_povm),
            "local_povm": povm_to_json(measurement.local_povm),
            "output_map": measurement.output_map.tolist(),
        }
    return {
        "class": measurement.order,
        "first": povm_to_json(measurement.first),
        "second": [povm_to_json(p) for p in measurement.second],
    }


def _measurement_from_json(data: Any) -> BobMeasurement:
    if not isinstance(data, dict):
        raise SchemaError("Bob measurement entries must be objects.")
    kind = data.get("class")
    if kind == "joint":
        return JointMeasurement(povm_from_json(data.get("povm")))
    if kind == "product":
        return ProductMeasurement(
            povm_from_json(data.get("message_povm")),
            povm_from_json(data.get("local_povm")),
            np.array(data.get("output_map"), dtype=float),
        )
    if kind in ("seq_M_then_B", "seq_B_then_M"):
        return SequentialMeasurement(
            povm_from_json(data.get("first")),
            tuple(povm_from_json(p) for p in data.get("second", [])),
            kind,
        )
    raise SchemaError(f"Unknown measurement class '{kind}'.")


def strategy_to_dict(strategy: Strategy) -> dict[str, Any]:
    """JSON-ready representation tagged with the schema version and a ``kind`` field."""
    header = {"schema": STRATEGY_SCHEMA}
    if isinstance(strategy, AdaptiveEAClassicalStrategy):
        return header | {
            "kind": KIND_ADAPTIVE,
            "shared_state": state_to_json(strategy.shared_state),
            "alice": [povm_to_json(p) for p in strategy.alice],
            "bob": [[povm_to_json(p) for p in row] for row in strategy.bob],
        }
    if isinstance(strategy, NonAdaptiveEAClassicalStrategy):
        return header | {
            "kind": KIND_NONADAPTIVE,
            "shared_state": state_to_json(strategy.shared_state),
            "alice": [povm_to_json(p) for p in strategy.alice],
            "bob_base": [povm_to_json(p) for p in strategy.bob_base],
            "postprocess": strategy.postprocess.tolist(),
            "num_outputs": strategy.num_outputs,
        }
    if isinstance(strategy, QuantumMessageStrategy):
        return header | {
            "kind": KIND_QUANTUM,
            "measurement_class": strategy.measurement_class,
            "shared_state": state_to_json(strategy.shared_state),
            "alice_channels": [channel_to_json(c) for c in strategy.alice_channels],
            "bob": [_measurement_to_json(m) for m in strategy.bob],
        }
    if isinstance(strategy, PrepareMeasureStrategy):
        return header | {
            "kind": KIND_PREPARE_MEASURE,
            "states": [state_to_json(s) for s in strategy.states],
            "povms": [povm_to_json(p) for p in strategy.povms],
        }
    raise TypeError(f"Unsupported strategy type {type(strategy).__name__}.")


def _list(data: dict[str, Any], key: str) -> list[Any]:
    value = data.get(key)
    if not isinstance(value, list):
        raise SchemaError(f"Field '{key}' must be a list.")
    return value


def strategy_from_dict(data: Any) -> Strategy:
    """Inverse of :func:`strategy_to_dict`.

    Raises:
        SchemaError: The document does not follow the strategy schema.
        InvariantViolation: A decoded state, POVM or channel breaks its invariants.
    """
    if not isinstance(data, dict):
        raise SchemaError("A strategy document must be a JSON object.")
    if data.get("schema") != STRATEGY_SCHEMA:
        raise SchemaError(f"Expected schema '{STRATEGY_SCHEMA}', got '{data.get('schema')}'.")
    kind = data.get("kind")
    try:
        if kind == KIND_ADAPTIVE:
            return AdaptiveEAClassicalStrategy(
                state_from_json(data.get("shared_state")),
                tuple(povm_from_json(p) for p in _list(data, "alice")),
                tuple(tuple(povm_from_json(p) for p in row) for row in _list(data, "bob")),
            )
        if kind == KIND_NONADAPTIVE:
            return NonAdaptiveEAClassicalStrategy(
                state_from_json(data.get("shared_state")),
                tuple(povm_from_json(p) for p in _list(data, "alice")),
                tuple(povm_from_json(p) for p in _list(data, "bob_base")),
                np.array(data.get("postprocess"), dtype=int),
                int(data.get("num_outputs", 0)),
            )
        if kind == KIND_QUANTUM:
            strategy = QuantumMessageStrategy(
                state_from_json(data.get("shared_state")),
                tuple(channel_from_json(c) for c in _list(data, "alice_channels")),
                tuple(_measurement_from_json(m) for m in _list(data, "bob")),
            )
            declared = data.get("measurement_class", strategy.measurement_class)
            if declared != strategy.measurement_class:
                raise SchemaError(
                    f"measurement_class '{declared}' does not match the measurements given."
                )
            return strategy
        if kind == KIND_PREPARE_MEASURE:
            return PrepareMeasureStrategy(
                tuple(state_from_json(s) for s in _list(data, "states")),
                tuple(povm_from_json(p) for p in _list(data, "povms")),
            )
    except (TypeError, KeyError) as e:
        raise SchemaError(f"Malformed strategy document: {e}") from e
    raise SchemaError(f"Unknown strategy kind '{kind}'.")


def save_strategy(strategy: Strategy, path: str | Path) -> None:
    with open(path, "w") as f:
        json.dump(strategy_to_dict(strategy), f, indent=2)


def load_strategy(path: str | Path) -> Strategy:
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path} is not valid JSON: {e}") from e
    return strategy_from_dict(data)
