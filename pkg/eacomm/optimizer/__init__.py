from ._ansatz import ANSATZ_CLASSES
from ._ansatz import decode
from ._ansatz import encode
from ._ansatz import StrategyAnsatz
from ._blocks import NORMALIZATION_EPS
from ._maximize import gradient_check
from ._maximize import maximize
from ._maximize import OptimizationResult
from ._maximize import OptimizerConfig
from ._maximize import RestartRecord
from ._models import Scenario
from ._models import StrategyModel
from ._problem import StrategyProblem


__all__ = [
    "ANSATZ_CLASSES",
    "decode",
    "encode",
    "gradient_check",
    "maximize",
    "NORMALIZATION_EPS",
    "OptimizationResult",
    "OptimizerConfig",
    "RestartRecord",
    "Scenario",
    "StrategyAnsatz",
    "StrategyModel",
    "StrategyProblem",
]
