"""Tests for the quantum primitives."""

import math

import numpy as np
import pytest

from eacomm._errors import InvariantViolation
from eacomm.core_linalg import bell_basis
from eacomm.core_linalg import bloch_from_matrix
from eacomm.core_linalg import BlochVector
from eacomm.core_linalg import DensityState
from eacomm.core_linalg import IDENTITY2
from eacomm.core_linalg import is_projector
from eacomm.core_linalg import is_psd
from eacomm.core_linalg import is_unitary
from eacomm.core_linalg import KrausChannel
from eacomm.core_linalg import kron
from eacomm.core_linalg import observable_povm
from eacomm.core_linalg import partial_trace
from eacomm.core_linalg import partial_trace_matrix
from eacomm.core_linalg import PAULI_X
from eacomm.core_linalg import PAULI_Z
from eacomm.core_linalg import phi_plus
from eacomm.core_linalg import Povm
from eacomm.core_linalg import povm_element_from_bloch
from eacomm.core_linalg import povm_from_json
from eacomm.core_linalg import povm_to_json
from eacomm.core_linalg import qubit_from_bloch
from eacomm.core_linalg import random_channel
from eacomm.core_linalg import random_density_state
from eacomm.core_linalg import random_povm
from eacomm.core_linalg import random_unitary
from eacomm.core_linalg import state_from_json
from eacomm.core_linalg import state_to_json
from eacomm.core_linalg import weyl_operator


PHI_PLUS = np.array([1, 0, 0, 1]) / math.sqrt(2)


class TestKron:
    """Tensor products."""

    def test_identity(self) -> None:
        """Two qubit identities give the four dimensional identity."""
        np.testing.assert_allclose(kron(IDENTITY2, IDENTITY2), np.eye(4))

    def test_zz_leaves_phi_plus_invariant(self) -> None:
        """Z⊗Z stabilizes |φ⁺⟩⟨φ⁺|."""
        zz = kron(PAULI_Z, PAULI_Z)
        rho = phi_plus().matrix
        np.testing.assert_allclose(zz @ rho @ zz, rho, atol=1e-12)

    def test_x_on_alice_flips_parity(self) -> None:
        """(X⊗𝟙)|φ⁺⟩ is the Bell state (|01⟩+|10⟩)/√2."""
        expected = np.array([0, 1, 1, 0]) / math.sqrt(2)
        np.testing.assert_allclose(kron(PAULI_X, IDENTITY2) @ PHI_PLUS, expected, atol=1e-12)


class TestPartialTrace:
    """Reduced states."""

    def test_maximally_entangled_marginal(self) -> None:
        reduced = partial_trace(phi_plus(), keep=[1])
        np.testing.assert_allclose(reduced.matrix, np.eye(2) / 2, atol=1e-12)
        assert reduced.dims == (2,)

    def test_product_state_recovers_factors(self) -> None:
        """partial_trace ∘ kron is exact."""
        rng = np.random.RandomState(0)
        for _ in range(20):
            rho = random_density_state([2], rng)
            sigma = random_density_state([3], rng)
            joint = rho.tensor(sigma)
            np.testing.assert_allclose(joint.partial_trace([0]).matrix, rho.matrix, atol=1e-12)
            np.testing.assert_allclose(joint.partial_trace([1]).matrix, sigma.matrix, atol=1e-12)

    def test_dense_coding_marginals_do_not_depend_on_input(self) -> None:
        """Alice's unitary leaves Bob's marginal at 𝟙/2 for every Bell state."""
        for vector in bell_basis(2):
            state = DensityState.from_vector(vector, (2, 2))
            np.testing.assert_allclose(state.partial_trace([1]).matrix, np.eye(2) / 2, atol=1e-12)

    def test_tripartite_middle_factor(self) -> None:
        rng = np.random.RandomState(1)
        factors = [random_density_state([d], rng) for d in (2, 3, 2)]
        joint = kron(*(f.matrix for f in factors))
        np.testing.assert_allclose(
            partial_trace_matrix(joint, [2, 3, 2], [1]), factors[1].matrix, atol=1e-12
        )

    def test_bad_index_set(self) -> None:
        with pytest.raises(ValueError, match="out of range"):
            partial_trace(phi_plus(), keep=[2])


class TestBlochCalculus:
    """Bloch sphere constructors."""

    def test_north_pole(self) -> None:
        state = qubit_from_bloch(BlochVector(0, 0, 1))
        np.testing.assert_allclose(state.matrix, np.diag([1, 0]), atol=1e-12)

    def test_plus_projector(self) -> None:
        element = povm_element_from_bloch(1.0, BlochVector(1, 0, 0))
        np.testing.assert_allclose(element, np.full((2, 2), 0.5), atol=1e-12)

    def test_weighted_element_is_psd(self) -> None:
        """The 7/8-weighted element is rank one with eigenvalues 0 and 7/8."""
        element = povm_element_from_bloch(7 / 8, BlochVector(-1 / 8, 0, -math.sqrt(3) / 2))
        assert is_psd(element)
        np.testing.assert_allclose(np.linalg.eigvalsh(element), [0, 7 / 8], atol=1e-12)

    def test_weight_below_norm_is_rejected(self) -> None:
        with pytest.raises(InvariantViolation):
            povm_element_from_bloch(0.5, BlochVector(1, 0, 0))

    def test_outside_unit_ball_is_rejected(self) -> None:
        with pytest.raises(InvariantViolation):
            qubit_from_bloch(BlochVector(1, 1, 0))

    def test_bloch_from_matrix(self) -> None:
        n = BlochVector(0.3, -0.4, 0.5)
        recovered = bloch_from_matrix(qubit_from_bloch(n).matrix)
        np.testing.assert_allclose(recovered.as_array(), n.as_array(), atol=1e-12)

    def test_bloch_from_matrix_needs_unit_trace(self) -> None:
        with pytest.raises(ValueError):
            bloch_from_matrix(IDENTITY2)


class TestObservablePovm:
    """Two outcome projective measurements."""

    def test_z(self) -> None:
        povm = observable_povm(BlochVector(0, 0, 1))
        np.testing.assert_allclose(povm.elements[0], np.diag([1, 0]), atol=1e-12)
        np.testing.assert_allclose(povm.elements[1], np.diag([0, 1]), atol=1e-12)

    def test_diagonal_direction(self) -> None:
        """Elements project onto the ±1 eigenspaces of (Z+X)/√2."""
        povm = observable_povm(BlochVector(1 / math.sqrt(2), 0, 1 / math.sqrt(2)))
        observable = (PAULI_Z + PAULI_X) / math.sqrt(2)
        np.testing.assert_allclose(observable @ povm.elements[0], povm.elements[0], atol=1e-12)
        np.testing.assert_allclose(observable @ povm.elements[1], -povm.elements[1], atol=1e-12)
        assert all(is_projector(e) for e in povm.elements)

    def test_maximally_mixed_gives_fair_coin(self) -> None:
        rng = np.random.RandomState(2)
        for _ in range(10):
            v = rng.normal(size=3)
            povm = observable_povm(BlochVector.from_array(v / np.linalg.norm(v)))
            np.testing.assert_allclose(povm.probabilities(np.eye(2) / 2), [0.5, 0.5], atol=1e-12)

    def test_non_unit_direction(self) -> None:
        with pytest.raises(ValueError, match="unit vector"):
            observable_povm(BlochVector(0, 0, 2))


class TestInvariants:
    """Validation of the quantum types."""

    def test_random_povms_are_complete(self) -> None:
        rng = np.random.RandomState(3)
        for dim, outcomes in [(1, 3), (2, 2), (2, 3), (4, 4)]:
            povm = random_povm(dim, outcomes, rng)
            np.testing.assert_allclose(sum(povm.elements), np.eye(dim), atol=1e-10)

    def test_incomplete_povm_is_rejected(self) -> None:
        with pytest.raises(InvariantViolation, match="sum to the identity"):
            Povm((np.diag([1.0, 0.0]),))

    def test_density_state_trace(self) -> None:
        with pytest.raises(InvariantViolation, match="trace"):
            DensityState(np.eye(2))

    def test_non_trace_preserving_channel(self) -> None:
        with pytest.raises(InvariantViolation):
            KrausChannel((np.diag([1.0, 0.5]),))

    def test_random_unitary(self) -> None:
        assert is_unitary(random_unitary(4, np.random.RandomState(4)))

    def test_channel_on_first_factor_keeps_second_marginal(self) -> None:
        rng = np.random.RandomState(5)
        channel = random_channel(2, 3, rng)
        rho = phi_plus()
        output = channel.apply(rho.matrix, rho.dims, subsystem=0)
        reduced = partial_trace_matrix(output, [3, 2], [1])
        np.testing.assert_allclose(reduced, np.eye(2) / 2, atol=1e-12)

    def test_weyl_operators_are_paulis_for_qubits(self) -> None:
        np.testing.assert_allclose(weyl_operator(2, 1, 0), PAULI_Z, atol=1e-12)
        np.testing.assert_allclose(weyl_operator(2, 0, 1), PAULI_X, atol=1e-12)


class TestJson:
    """JSON encoding of quantum objects."""

    def test_state_and_povm(self) -> None:
        rng = np.random.RandomState(6)
        state = random_density_state([2, 2], rng)
        restored = state_from_json(state_to_json(state))
        np.testing.assert_array_equal(restored.matrix, state.matrix)
        assert restored.dims == (2, 2)

        povm = random_povm(2, 3, rng)
        restored_povm = povm_from_json(povm_to_json(povm))
        for a, b in zip(restored_povm.elements, povm.elements):
            np.testing.assert_array_equal(a, b)
