from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
import json
from pathlib import Path
from typing import Any

import numpy as np

from eacomm._errors import SchemaError
from eacomm.protocol import Behavior


FUNCTIONAL_SCHEMA = "eacomm/functional/v1"


@dataclass(frozen=True, eq=False)
class LinearFunctional:
    """f(p) = Σ c[x,y,b] p(b|x,y) + offset.

    Args:
        coeffs:
            Coefficient tensor of shape (X, Y, B).
        offset:
            Constant term.
        name:
            Label used in reports and by the CLI.
        outcome_counts:
            Number of outcomes each setting y can produce. Defaults to B for every y.
            Coefficients on impossible outcomes must vanish.
        input_distribution:
            Optional weights over (x, y) for score-type functionals such as the RAC.
    """

    coeffs: np.ndarray
    offset: float = 0.0
    name: str = ""
    outcome_counts: tuple[int, ...] = ()
    input_distribution: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.ndim != 3:
            raise ValueError(f"Coefficients must have shape (X, Y, B), got {coeffs.shape}.")
        num_settings, num_outputs = coeffs.shape[1], coeffs.shape[2]
        counts = tuple(int(c) for c in self.outcome_counts) or (num_outputs,) * num_settings
        if len(counts) != num_settings or any(c < 1 or c > num_outputs for c in counts):
            raise ValueError(f"outcome_counts {counts} do not fit coefficients {coeffs.shape}.")
        for y, count in enumerate(counts):
            if np.any(coeffs[:, y, count:] != 0.0):
                raise ValueError(f"Setting {y} has nonzero coefficients on impossible outcomes.")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "outcome_counts", counts)
        object.__setattr__(self, "offset", float(self.offset))
        if self.input_distribution is not None:
            weights = np.array(self.input_distribution, dtype=float)
            if weights.shape != coeffs.shape[:2]:
                raise ValueError("input_distribution must have shape (X, Y).")
            object.__setattr__(self, "input_distribution", weights)

    @property
    def dims(self) -> tuple[int, int, int]:
        x, y, b = self.coeffs.shape
        return int(x), int(y), int(b)

    def scaled(self, factor: float) -> LinearFunctional:
        return LinearFunctional(
            factor * self.coeffs,
            factor * self.offset,
            self.name,
            self.outcome_counts,
            self.input_distribution,
        )

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "schema": FUNCTIONAL_SCHEMA,
            "name": self.name,
            "dims": list(self.dims),
            "coeffs": self.coeffs.tolist(),
            "offset": self.offset,
            "outcome_counts": list(self.outcome_counts),
        }
        if self.input_distribution is not None:
            data["input_distribution"] = self.input_distribution.tolist()
        return data

    @classmethod
    def from_dict(cls, data: Any) -> LinearFunctional:
        if not isinstance(data, dict) or data.get("schema") != FUNCTIONAL_SCHEMA:
            raise SchemaError(f"Expected a functional with schema '{FUNCTIONAL_SCHEMA}'.")
        try:
            return cls(
                np.array(data["coeffs"], dtype=float),
                float(data.get("offset", 0.0)),
                str(data.get("name", "")),
                tuple(data.get("outcome_counts", ())),
                data.get("input_distribution"),
            )
        except (KeyError, TypeError) as e:
            raise SchemaError(f"Malformed functional document: {e}") from e

    def save(self, path: str | Path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)


def evaluate(f: LinearFunctional, p: Behavior) -> float:
    """Σ c·p + offset."""
    if f.dims != p.dims:
        raise ValueError(f"Functional dims {f.dims} do not match behavior dims {p.dims}.")
    return float(np.sum(f.coeffs * p.table) + f.offset)


def rac_functional(num_bits: int = 2) -> LinearFunctional:
    """Average success of guessing bit x_y of a ``num_bits``-bit input.

    Input x encodes bits most significant first: x = Σ_k x_k 2^(n-1-k).
    """
    if num_bits < 1:
        raise ValueError("num_bits must be positive.")
    num_inputs = 2**num_bits
    weight = 1.0 / (num_inputs * num_bits)
    coeffs = np.zeros((num_inputs, num_bits, 2))
    for x in range(num_inputs):
        for y in range(num_bits):
            coeffs[x, y, (x >> (num_bits - 1 - y)) & 1] = weight
    return LinearFunctional(
        coeffs,
        name=f"rac-{num_bits}",
        input_distribution=np.full((num_inputs, num_bits), weight),
    )


def facet_functional() -> LinearFunctional:
    """F = −p(1|11)+p(1|21)+p(1|31)−p(1|12)−p(1|22)+p(1|32)−p(2|12)+p(2|22)−p(2|32).

    Labels are 1-based (b|x y); setting y=1 has two outcomes, y=2 has three.
    """
    coeffs = np.zeros((3, 2, 3))
    terms = [
        (-1, 1, 1, 1),
        (+1, 1, 2, 1),
        (+1, 1, 3, 1),
        (-1, 1, 1, 2),
        (-1, 1, 2, 2),
        (+1, 1, 3, 2),
        (-1, 2, 1, 2),
        (+1, 2, 2, 2),
        (-1, 2, 3, 2),
    ]
    for sign, b, x, y in terms:
        coeffs[x - 1, y - 1, b - 1] += sign
    return LinearFunctional(coeffs, name="facet", outcome_counts=(2, 3))


def mesd_functional(num_states: int) -> LinearFunctional:
    """Average probability of naming which of ``num_states`` inputs was sent."""
    coeffs = np.zeros((num_states, 1, num_states))
    coeffs[np.arange(num_states), 0, np.arange(num_states)] = 1.0 / num_states
    return LinearFunctional(coeffs, name=f"mesd-{num_states}")


def mesd_rate(p: Behavior) -> float:
    """(1/X) Σ_x p(b=x|x) for a single-setting behavior with B = X."""
    num_inputs, num_settings, num_outputs = p.dims
    if num_settings != 1 or num_outputs != num_inputs:
        raise ValueError(f"Discrimination needs Y=1 and B=X, got dims {p.dims}.")
    return float(np.mean(np.diagonal(p.table[:, 0, :])))


def dense_coding_mesd(message_dim: int, num_states: int) -> float:
    """Discrimination rate min(1, D²/X) reached by dense coding."""
    return min(1.0, message_dim**2 / num_states)


def separable_mesd_bound(message_dim: int, num_states: int) -> float:
    """Upper bound min(1, D/X) for measurements separable across message and local share."""
    return min(1.0, message_dim / num_states)
