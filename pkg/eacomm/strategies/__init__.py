from ._dense_coding import dense_coding_strategy
from ._dense_coding import stochastic_dense_coding_rac
from ._qubit import FACET_OUTCOME_TYPES
from ._qubit import facet_qubit_povm_strategy
from ._qubit import facet_qubit_projective_strategy
from ._qubit import QubitElement
from ._qubit import QubitPrepareMeasure
from ._qubit import simulate_qubit_pm
from ._qubit import unassisted_qubit_rac
from ._rac import adaptive_ea_trit_rac
from ._rac import chsh_ea_bit_rac
from ._rac import na_ea_trit_rac
from ._rac import na_ea_trit_value
from ._rac import optimal_tilt
from ._registry import build_strategy
from ._registry import STRATEGY_BUILDERS


__all__ = [
    "adaptive_ea_trit_rac",
    "build_strategy",
    "chsh_ea_bit_rac",
    "dense_coding_strategy",
    "FACET_OUTCOME_TYPES",
    "facet_qubit_povm_strategy",
    "facet_qubit_projective_strategy",
    "na_ea_trit_rac",
    "na_ea_trit_value",
    "optimal_tilt",
    "QubitElement",
    "QubitPrepareMeasure",
    "simulate_qubit_pm",
    "stochastic_dense_coding_rac",
    "STRATEGY_BUILDERS",
    "unassisted_qubit_rac",
]
