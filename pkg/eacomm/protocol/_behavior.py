from __future__ import annotations

import csv
from dataclasses import dataclass
from dataclasses import field
from pathlib import Path
from typing import Any

import numpy as np

from eacomm._errors import InvariantViolation
from eacomm._errors import SchemaError
from eacomm.core_linalg import BEHAVIOR_TOL


BEHAVIOR_SCHEMA = "eacomm/behavior/v1"


def behavior_violation(table: np.ndarray) -> float:
    """Largest deviation of ``table`` from being a conditional distribution p(b|x,y)."""
    below = float(np.max(-table, initial=0.0))
    above = float(np.max(table - 1.0, initial=0.0))
    normalization = float(np.max(np.abs(table.sum(axis=2) - 1.0), initial=0.0))
    return max(below, above, normalization)


@dataclass(frozen=True, eq=False)
class Behavior:
    """Conditional distribution p(b|x,y) stored as ``table[x, y, b]``.

    Indices are 0-based. Outcomes that a setting cannot produce are kept with probability 0,
    so the tensor always has the maximal number of outputs.
    """

    table: np.ndarray
    tol: float = field(default=BEHAVIOR_TOL, repr=False)

    def __post_init__(self) -> None:
        table = np.array(self.table, dtype=float)
        if table.ndim != 3:
            raise ValueError(f"A behavior table has shape (X, Y, B), got {table.shape}.")
        violation = behavior_violation(table)
        if violation > self.tol:
            raise InvariantViolation(
                "Table is not a conditional probability distribution", violation
            )
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @property
    def dims(self) -> tuple[int, int, int]:
        x, y, b = self.table.shape
        return int(x), int(y), int(b)

    @property
    def num_inputs(self) -> int:
        return self.dims[0]

    @property
    def num_settings(self) -> int:
        return self.dims[1]

    @property
    def num_outputs(self) -> int:
        return self.dims[2]

    def max_violation(self) -> float:
        return behavior_violation(self.table)

    def probability(self, x: int, y: int, b: int) -> float:
        return float(self.table[x, y, b])

    def mix(self, other: Behavior, weight: float) -> Behavior:
        """weight·self + (1 − weight)·other."""
        if self.dims != other.dims:
            raise ValueError(f"Cannot mix behaviors of dims {self.dims} and {other.dims}.")
        return Behavior(weight * self.table + (1.0 - weight) * other.table)

    def to_dict(self) -> dict[str, Any]:
        return {"schema": BEHAVIOR_SCHEMA, "dims": list(self.dims), "p": self.table.tolist()}

    @classmethod
    def from_dict(cls, data: Any) -> Behavior:
        if not isinstance(data, dict) or data.get("schema") != BEHAVIOR_SCHEMA:
            raise SchemaError(f"Expected a behavior with schema '{BEHAVIOR_SCHEMA}'.")
        try:
            table = np.array(data["p"], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"Malformed behavior table: {e}") from e
        if list(table.shape) != list(data.get("dims", table.shape)):
            raise SchemaError(f"Behavior dims {data.get('dims')} do not match the table.")
        return cls(table)

    def to_csv(self, path: str | Path) -> None:
        """Write rows ``x,y,b,p`` with 1-based labels."""
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["x", "y", "b", "p"])
            for (x, y, b), p in np.ndenumerate(self.table):
                writer.writerow([x + 1, y + 1, b + 1, repr(float(p))])

    @classmethod
    def from_csv(cls, path: str | Path) -> Behavior:
        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))
        try:
            entries = [
                (int(r["x"]) - 1, int(r["y"]) - 1, int(r["b"]) - 1, float(r["p"])) for r in rows
            ]
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"Behavior CSV needs columns x,y,b,p: {e}") from e
        if not entries or min(min(e[:3]) for e in entries) < 0:
            raise SchemaError("Behavior CSV is empty or uses labels below 1.")
        shape = tuple(max(e[i] for e in entries) + 1 for i in range(3))
        table = np.zeros(shape)
        for x, y, b, p in entries:
            table[x, y, b] = p
        return cls(table)
