"""Entanglement-assisted classical protocols for the 2→1 random access code.

Inputs are x = 2·x1 + x2. Alice and Bob share |φ⁺⟩ and Alice measures along a direction a_x
in the X-Z plane; outcome + leaves Bob's qubit with Bloch vector a_x, outcome − with −a_x.
"""

from __future__ import annotations

import math

import numpy as np

from eacomm.core_linalg import BlochVector
from eacomm.core_linalg import bloch_matrix
from eacomm.core_linalg import observable_povm
from eacomm.core_linalg import phi_plus
from eacomm.core_linalg import Povm
from eacomm.protocol import AdaptiveEAClassicalStrategy
from eacomm.protocol import NonAdaptiveEAClassicalStrategy


_Z = BlochVector(0.0, 0.0, 1.0)
_X = BlochVector(1.0, 0.0, 0.0)


def _bits(x: int) -> tuple[int, int]:
    return x >> 1, x & 1


def _tilted_direction(x: int, theta: float) -> BlochVector:
    x1, x2 = _bits(x)
    return BlochVector((-1) ** x2 * math.sin(theta), 0.0, (-1) ** x1 * math.cos(theta))


def _projectors(direction: BlochVector) -> tuple[np.ndarray, np.ndarray]:
    d = direction.as_array()
    return bloch_matrix(1.0, d), bloch_matrix(1.0, -d)


def chsh_ea_bit_rac() -> NonAdaptiveEAClassicalStrategy:
    """One ebit and one bit reaching ½(1 + 1/√2).

    Alice sends the outcome of ((−1)^{x1} Z + (−1)^{x2} X)/√2. Bob measures Z to guess x1 and
    X to guess x2, answering 0 when his outcome agrees with the message.
    """
    alice = tuple(observable_povm(_tilted_direction(x, math.pi / 4)) for x in range(4))
    bob_base = (observable_povm(_Z), observable_povm(_X))
    postprocess = np.array([[[0 if m == c else 1 for c in range(2)] for m in range(2)]] * 2)
    return NonAdaptiveEAClassicalStrategy(phi_plus(), alice, bob_base, postprocess, 2)


def na_ea_trit_value(theta: float) -> float:
    """(5 + cos θ + 2 sin θ)/8."""
    return (5.0 + math.cos(theta) + 2.0 * math.sin(theta)) / 8.0


def optimal_tilt() -> float:
    """The angle with cos θ = 1/√5 maximizing :func:`na_ea_trit_value`."""
    return math.acos(1.0 / math.sqrt(5.0))


def na_ea_trit_rac(theta: float | None = None) -> NonAdaptiveEAClassicalStrategy:
    """Non-adaptive trit protocol with Alice's direction tilted by ``theta``.

    Messages: 0 is "+1", 1 is "(−1, x1=0)" and 2 is "(−1, x1=1)". After a − outcome Bob answers
    x1 directly for y = 0 and flips his X outcome for y = 1. Defaults to :func:`optimal_tilt`.
    """
    theta = optimal_tilt() if theta is None else float(theta)
    if not 0.0 < theta < math.pi / 2:
        raise ValueError(f"theta must lie in (0, π/2), got {theta}.")
    zero = np.zeros((2, 2), dtype=np.complex128)
    alice = []
    for x in range(4):
        plus, minus = _projectors(_tilted_direction(x, theta))
        x1, _ = _bits(x)
        alice.append(Povm((plus, minus if x1 == 0 else zero, minus if x1 == 1 else zero)))
    bob_base = (observable_povm(_Z), observable_povm(_X))
    postprocess = np.zeros((2, 3, 2), dtype=int)
    for y in range(2):
        postprocess[y, 0] = [0, 1]
        for m in (1, 2):
            postprocess[y, m] = [m - 1, m - 1] if y == 0 else [1, 0]
    return NonAdaptiveEAClassicalStrategy(phi_plus(), tuple(alice), bob_base, postprocess, 2)


def adaptive_ea_trit_rac() -> AdaptiveEAClassicalStrategy:
    """Adaptive trit protocol reaching ¼(3 + 1/√2).

    Alice sends 0 on outcome + and 1 + (x1 ⊕ x2) otherwise. On message 1 or 2 Bob's qubit is
    one of two antipodal states and a measurement along (±1, 0, 1)/√2 reveals x exactly.
    """
    zero = np.zeros((2, 2), dtype=np.complex128)
    alice = []
    for x in range(4):
        plus, minus = _projectors(_tilted_direction(x, math.pi / 4))
        x1, x2 = _bits(x)
        slots = [plus, zero, zero]
        slots[1 + (x1 ^ x2)] = minus
        alice.append(Povm(tuple(slots)))

    c = 1.0 / math.sqrt(2.0)
    plus_equal, minus_equal = _projectors(BlochVector(c, 0.0, c))
    plus_differ, minus_differ = _projectors(BlochVector(-c, 0.0, c))
    bob = []
    for y, axis in enumerate((_Z, _X)):
        after_plus = observable_povm(axis)
        after_equal = Povm((minus_equal, plus_equal))
        if y == 0:
            after_differ = Povm((minus_differ, plus_differ))
        else:
            after_differ = Povm((plus_differ, minus_differ))
        bob.append((after_plus, after_equal, after_differ))
    return AdaptiveEAClassicalStrategy(phi_plus(), tuple(alice), tuple(bob))
