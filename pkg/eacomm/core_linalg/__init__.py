from ._matrix import as_matrix
from ._matrix import BEHAVIOR_TOL
from ._matrix import bloch_components
from ._matrix import bloch_matrix
from ._matrix import clock_operator
from ._matrix import commutator
from ._matrix import dagger
from ._matrix import hermitian_part
from ._matrix import IDENTITY2
from ._matrix import inverse_sqrt_psd
from ._matrix import is_hermitian
from ._matrix import is_projector
from ._matrix import is_psd
from ._matrix import is_unitary
from ._matrix import kron
from ._matrix import min_eigenvalue
from ._matrix import operator_norm
from ._matrix import partial_trace_matrix
from ._matrix import PAULI_X
from ._matrix import PAULI_Y
from ._matrix import PAULI_Z
from ._matrix import shift_operator
from ._matrix import STRUCTURAL_TOL
from ._quantum import bell_basis
from ._quantum import bloch_from_matrix
from ._quantum import BlochVector
from ._quantum import DensityState
from ._quantum import KrausChannel
from ._quantum import maximally_entangled_vector
from ._quantum import observable_povm
from ._quantum import partial_trace
from ._quantum import phi_plus
from ._quantum import Povm
from ._quantum import povm_element_from_bloch
from ._quantum import qubit_from_bloch
from ._quantum import weyl_operator
from ._random import random_channel
from ._random import random_density_state
from ._random import random_povm
from ._random import random_pure_state
from ._random import random_unitary
from ._serialization import channel_from_json
from ._serialization import channel_to_json
from ._serialization import matrix_from_json
from ._serialization import matrix_to_json
from ._serialization import povm_from_json
from ._serialization import povm_to_json
from ._serialization import state_from_json
from ._serialization import state_to_json


__all__ = [
    "as_matrix",
    "BEHAVIOR_TOL",
    "bell_basis",
    "bloch_components",
    "bloch_from_matrix",
    "bloch_matrix",
    "BlochVector",
    "channel_from_json",
    "channel_to_json",
    "clock_operator",
    "commutator",
    "dagger",
    "DensityState",
    "hermitian_part",
    "IDENTITY2",
    "inverse_sqrt_psd",
    "is_hermitian",
    "is_projector",
    "is_psd",
    "is_unitary",
    "KrausChannel",
    "kron",
    "matrix_from_json",
    "matrix_to_json",
    "maximally_entangled_vector",
    "min_eigenvalue",
    "observable_povm",
    "operator_norm",
    "partial_trace",
    "partial_trace_matrix",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "phi_plus",
    "Povm",
    "povm_element_from_bloch",
    "povm_from_json",
    "povm_to_json",
    "qubit_from_bloch",
    "random_channel",
    "random_density_state",
    "random_povm",
    "random_pure_state",
    "random_unitary",
    "shift_operator",
    "state_from_json",
    "state_to_json",
    "STRUCTURAL_TOL",
    "weyl_operator",
]
