from __future__ import annotations

from typing import Callable

from eacomm.protocol import Strategy
from eacomm.strategies._dense_coding import dense_coding_strategy
from eacomm.strategies._dense_coding import stochastic_dense_coding_rac
from eacomm.strategies._qubit import facet_qubit_povm_strategy
from eacomm.strategies._qubit import facet_qubit_projective_strategy
from eacomm.strategies._qubit import simulate_qubit_pm
from eacomm.strategies._qubit import unassisted_qubit_rac
from eacomm.strategies._rac import adaptive_ea_trit_rac
from eacomm.strategies._rac import chsh_ea_bit_rac
from eacomm.strategies._rac import na_ea_trit_rac


StrategyBuilder = Callable[..., Strategy]


def _facet_simulation(**_: object) -> Strategy:
    target = facet_qubit_povm_strategy()
    return simulate_qubit_pm(target.states, target.povms)


def _facet_projective(outcome_type: int = 0, **_: object) -> Strategy:
    return facet_qubit_projective_strategy(outcome_type).to_strategy()


def _dense_coding(dim: int = 2, measurement_class: str = "joint", **_: object) -> Strategy:
    return dense_coding_strategy(dim, measurement_class)


def _na_ea_trit(theta: float | None = None, **_: object) -> Strategy:
    return na_ea_trit_rac(theta)


STRATEGY_BUILDERS: dict[str, StrategyBuilder] = {
    "ea-bit-rac": lambda **_: chsh_ea_bit_rac(),
    "na-ea-trit-rac": _na_ea_trit,
    "adaptive-ea-trit-rac": lambda **_: adaptive_ea_trit_rac(),
    "unassisted-qubit-rac": lambda **_: unassisted_qubit_rac().to_strategy(),
    "stochastic-dense-coding-rac": lambda **_: stochastic_dense_coding_rac(),
    "dense-coding": _dense_coding,
    "facet-qubit-povm": lambda **_: facet_qubit_povm_strategy().to_strategy(),
    "facet-qubit-projective": _facet_projective,
    "facet-ea-bit-simulation": _facet_simulation,
}


def build_strategy(name: str, **options: object) -> Strategy:
    """Build a named construction; options not used by it are ignored.

    Options are ``theta`` (na-ea-trit-rac), ``dim`` and ``measurement_class`` (dense-coding)
    and ``outcome_type`` (facet-qubit-projective). ``None`` values fall back to defaults.
    """
    if name not in STRATEGY_BUILDERS:
        raise ValueError(f"Unknown strategy '{name}'. Choose from {sorted(STRATEGY_BUILDERS)}.")
    given = {key: value for key, value in options.items() if value is not None}
    return STRATEGY_BUILDERS[name](**given)
