from __future__ import annotations

import numpy as np

from eacomm.core_linalg import bell_basis
from eacomm.core_linalg import DensityState
from eacomm.core_linalg import KrausChannel
from eacomm.core_linalg import maximally_entangled_vector
from eacomm.core_linalg import PAULI_X
from eacomm.core_linalg import PAULI_Z
from eacomm.core_linalg import Povm
from eacomm.core_linalg import weyl_operator
from eacomm.protocol import JointMeasurement
from eacomm.protocol import ProductMeasurement
from eacomm.protocol import QuantumMessageStrategy


def _shared_state(dim: int) -> DensityState:
    return DensityState.from_vector(maximally_entangled_vector(dim), (dim, dim))


def _encodings(dim: int) -> tuple[KrausChannel, ...]:
    return tuple(
        KrausChannel.unitary(weyl_operator(dim, a, b)) for a in range(dim) for b in range(dim)
    )


def _eigenbasis_povm(observable: np.ndarray) -> Povm:
    """Projectors onto the +1 and −1 eigenvectors of a Pauli observable, in that order."""
    identity = np.eye(2)
    return Povm(((identity + observable) / 2, (identity - observable) / 2))


def _parity_measurement(observable: np.ndarray, num_outputs: int) -> ProductMeasurement:
    """Measure ``observable`` on both qubits and answer the parity of the two outcomes."""
    povm = _eigenbasis_povm(observable)
    parity = np.array([[0, 1], [1, 0]])
    return ProductMeasurement.deterministic(povm, povm, parity, num_outputs)


def dense_coding_strategy(
    dim: int = 2, measurement_class: str = "joint"
) -> QuantumMessageStrategy:
    """Dense coding of X = D² inputs into one D-dimensional message.

    Alice applies the Weyl operator Z^a X^b for x = a·D + b to her half of a maximally entangled
    state. ``"joint"`` decodes with the generalized Bell measurement and always succeeds.
    ``"product"`` (D=2 only) measures Z ⊗ Z, which reveals b and nothing about a.
    """
    if dim < 2:
        raise ValueError(f"Dense coding needs dim >= 2, got {dim}.")
    if measurement_class == "joint":
        bell = Povm(tuple(np.outer(v, v.conj()) for v in bell_basis(dim)))
        bob: tuple[JointMeasurement | ProductMeasurement, ...] = (JointMeasurement(bell),)
    elif measurement_class == "product":
        if dim != 2:
            raise ValueError("The product decoder is only defined for dim=2.")
        bob = (_parity_measurement(PAULI_Z, 4),)
    else:
        raise ValueError(
            f"measurement_class must be 'joint' or 'product', got '{measurement_class}'."
        )
    return QuantumMessageStrategy(_shared_state(dim), _encodings(dim), bob)


def stochastic_dense_coding_rac() -> QuantumMessageStrategy:
    """Perfect 2→1 RAC with one qubit message and product measurements.

    Alice applies Z^{x1} X^{x2}. The parity of X ⊗ X reveals x1 and the parity of Z ⊗ Z
    reveals x2.
    """
    return QuantumMessageStrategy(
        _shared_state(2),
        _encodings(2),
        (_parity_measurement(PAULI_X, 2), _parity_measurement(PAULI_Z, 2)),
    )
