from __future__ import annotations

from typing import Any

import numpy as np

from eacomm._errors import SchemaError
from eacomm.core_linalg._quantum import DensityState
from eacomm.core_linalg._quantum import KrausChannel
from eacomm.core_linalg._quantum import Povm


def matrix_to_json(matrix: np.ndarray) -> list[list[list[float]]]:
    """Nested row-major list of [re, im] pairs."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(matrix)]


def matrix_from_json(data: Any) -> np.ndarray:
    try:
        array = np.array(data, dtype=float)
    except (TypeError, ValueError) as e:
        raise SchemaError(f"Matrix entries must be [re, im] pairs: {e}") from e
    if array.ndim != 3 or array.shape[2] != 2:
        raise SchemaError(f"Matrix must be a rows x cols x 2 array, got shape {array.shape}.")
    return array[..., 0] + 1j * array[..., 1]


def _require(data: Any, key: str) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise SchemaError(f"Missing field '{key}'.")
    return data[key]


def state_to_json(state: DensityState) -> dict[str, Any]:
    return {"dims": list(state.dims), "matrix": matrix_to_json(state.matrix)}


def state_from_json(data: Any) -> DensityState:
    dims = _require(data, "dims")
    return DensityState(matrix_from_json(_require(data, "matrix")), tuple(int(d) for d in dims))


def povm_to_json(povm: Povm) -> dict[str, Any]:
    return {"dims": [povm.dim], "elements": [matrix_to_json(e) for e in povm.elements]}


def povm_from_json(data: Any) -> Povm:
    elements = _require(data, "elements")
    if not isinstance(elements, list):
        raise SchemaError("Field 'elements' must be a list.")
    povm = Povm(tuple(matrix_from_json(e) for e in elements))
    dims = data.get("dims", [povm.dim])
    if int(np.prod(dims)) != povm.dim:
        raise SchemaError(f"POVM dims {dims} do not match element size {povm.dim}.")
    return povm


def channel_to_json(channel: KrausChannel) -> dict[str, Any]:
    return {
        "dims": [channel.in_dim, channel.out_dim],
        "kraus": [matrix_to_json(k) for k in channel.kraus_ops],
    }


def channel_from_json(data: Any) -> KrausChannel:
    kraus = _require(data, "kraus")
    if not isinstance(kraus, list):
        raise SchemaError("Field 'kraus' must be a list.")
    return KrausChannel(tuple(matrix_from_json(k) for k in kraus))
