from __future__ import annotations

from dataclasses import dataclass
import itertools
from typing import Iterator

import numpy as np
import optuna

from eacomm._errors import EnumerationLimitError
from eacomm.protocol import Behavior
from eacomm.tasks._functional import LinearFunctional


_logger = optuna.logging.get_logger(__name__)

ENUMERATION_LIMIT = 10**8
_BATCH = 4096


@dataclass(frozen=True)
class ClassicalBound:
    """Best deterministic classical strategy for a functional and message size.

    ``encoding[x]`` is the message sent on input x, ``decoding[y, m]`` Bob's answer.
    """

    value: float
    message_size: int
    encoding: tuple[int, ...]
    decoding: np.ndarray

    def behavior(self, num_outputs: int) -> Behavior:
        return deterministic_behavior(self.encoding, self.decoding, num_outputs)


@dataclass(frozen=True)
class FacetCertificate:
    """Affine dimensions of the classical polytope and of the face a functional saturates."""

    bound: float
    polytope_dim: int
    face_dim: int
    num_tight: int

    @property
    def is_facet(self) -> bool:
        return self.face_dim == self.polytope_dim - 1


def _check_guard(f: LinearFunctional, message_size: int) -> None:
    num_inputs, num_settings, num_outputs = f.dims
    size = message_size**num_inputs * num_outputs ** (num_settings * message_size)
    if size > ENUMERATION_LIMIT:
        raise EnumerationLimitError(
            f"Enumerating {size:.3e} classical strategies exceeds the limit "
            f"{ENUMERATION_LIMIT:.0e}."
        )


def _encodings(num_inputs: int, message_size: int) -> Iterator[np.ndarray]:
    batch = []
    for encoding in itertools.product(range(message_size), repeat=num_inputs):
        batch.append(encoding)
        if len(batch) == _BATCH:
            yield np.array(batch, dtype=int)
            batch = []
    if batch:
        yield np.array(batch, dtype=int)


def _valid_mask(f: LinearFunctional) -> np.ndarray:
    num_outputs = f.dims[2]
    return np.array([[b < count for b in range(num_outputs)] for count in f.outcome_counts])


def classical_bound(f: LinearFunctional, message_size: int) -> ClassicalBound:
    """Exact maximum of ``f`` over deterministic encodings and decodings.

    Shared randomness cannot do better since ``f`` is linear. For each encoding the best
    decoding is found per (y, m) independently.

    Raises:
        EnumerationLimitError: D^X · B^(Y·D) exceeds 10⁸.
    """
    if message_size < 1:
        raise ValueError("message_size must be positive.")
    _check_guard(f, message_size)
    num_inputs, num_settings, _ = f.dims
    invalid = ~_valid_mask(f)

    best_value = -np.inf
    best_encoding: tuple[int, ...] = ()
    best_decoding = np.zeros((num_settings, message_size), dtype=int)
    for encodings in _encodings(num_inputs, message_size):
        one_hot = np.eye(message_size)[encodings]  # (N, X, D)
        scores = np.einsum("nxm,xyb->nymb", one_hot, f.coeffs)
        scores[:, invalid[:, None, :].repeat(message_size, axis=1)] = -np.inf
        values = scores.max(axis=3).sum(axis=(1, 2))
        index = int(np.argmax(values))
        if values[index] > best_value:
            best_value = float(values[index])
            best_encoding = tuple(int(m) for m in encodings[index])
            best_decoding = np.argmax(scores[index], axis=2)
    _logger.debug(f"Classical bound with D={message_size}: {best_value + f.offset}")
    return ClassicalBound(best_value + f.offset, message_size, best_encoding, best_decoding)


def deterministic_behavior(
    encoding: tuple[int, ...] | np.ndarray, decoding: np.ndarray, num_outputs: int
) -> Behavior:
    """Behavior of the strategy that sends encoding[x] and answers decoding[y, m]."""
    decoding = np.asarray(decoding, dtype=int)
    table = np.zeros((len(encoding), decoding.shape[0], num_outputs))
    for x, m in enumerate(encoding):
        for y in range(decoding.shape[0]):
            table[x, y, decoding[y, m]] = 1.0
    return Behavior(table)


def _all_vertices(f: LinearFunctional, message_size: int) -> np.ndarray:
    """Every deterministic behavior restricted to possible outcomes, one per row."""
    _check_guard(f, message_size)
    num_inputs, num_settings, num_outputs = f.dims
    valid = _valid_mask(f)
    decoding_choices = [
        itertools.product(range(count), repeat=message_size) for count in f.outcome_counts
    ]
    decodings = [np.array(d, dtype=int) for d in itertools.product(*decoding_choices)]
    rows = []
    for encoding in itertools.product(range(message_size), repeat=num_inputs):
        for decoding in decodings:
            table = np.zeros((num_inputs, num_settings, num_outputs))
            for x, m in enumerate(encoding):
                table[x, np.arange(num_settings), decoding[:, m]] = 1.0
            rows.append(table[:, valid].reshape(-1))
    return np.unique(np.array(rows), axis=0)


def _affine_dim(points: np.ndarray) -> int:
    if len(points) == 0:
        return -1
    return int(np.linalg.matrix_rank(points - points[0], tol=1e-9))


def tight_deterministic_behaviors(
    f: LinearFunctional, message_size: int, tol: float = 1e-9
) -> np.ndarray:
    """Distinct deterministic behaviors reaching the classical bound.

    Rows are flattened over (x, y, b) with impossible outcomes dropped.
    """
    bound = classical_bound(f, message_size).value
    vertices = _all_vertices(f, message_size)
    coeffs = f.coeffs[:, _valid_mask(f)]
    values = vertices @ coeffs.reshape(-1) + f.offset
    return vertices[values >= bound - tol]


def facet_certificate(f: LinearFunctional, message_size: int) -> FacetCertificate:
    """Compare the affine dimension of the tight vertices with that of the whole polytope."""
    bound = classical_bound(f, message_size).value
    tight = tight_deterministic_behaviors(f, message_size)
    return FacetCertificate(
        bound=bound,
        polytope_dim=_affine_dim(_all_vertices(f, message_size)),
        face_dim=_affine_dim(tight),
        num_tight=len(tight),
    )
