from ._behavior import Behavior
from ._behavior import behavior_violation
from ._evaluation import behavior_of
from ._evaluation import behavior_of_adaptive
from ._evaluation import behavior_of_nonadaptive
from ._evaluation import behavior_of_prepare_measure
from ._evaluation import behavior_of_quantum
from ._evaluation import check_nonadaptive
from ._evaluation import conditional_states
from ._evaluation import lift_to_adaptive
from ._evaluation import message_states
from ._evaluation import NonAdaptivityReport
from ._serialization import load_strategy
from ._serialization import save_strategy
from ._serialization import STRATEGY_SCHEMA
from ._serialization import strategy_from_dict
from ._serialization import strategy_to_dict
from ._strategy import AdaptiveEAClassicalStrategy
from ._strategy import BobMeasurement
from ._strategy import JointMeasurement
from ._strategy import MEASUREMENT_CLASSES
from ._strategy import NonAdaptiveEAClassicalStrategy
from ._strategy import PrepareMeasureStrategy
from ._strategy import ProductMeasurement
from ._strategy import QuantumMessageStrategy
from ._strategy import SequentialMeasurement
from ._strategy import Strategy


__all__ = [
    "AdaptiveEAClassicalStrategy",
    "Behavior",
    "behavior_of",
    "behavior_of_adaptive",
    "behavior_of_nonadaptive",
    "behavior_of_prepare_measure",
    "behavior_of_quantum",
    "behavior_violation",
    "BobMeasurement",
    "check_nonadaptive",
    "conditional_states",
    "JointMeasurement",
    "lift_to_adaptive",
    "load_strategy",
    "MEASUREMENT_CLASSES",
    "message_states",
    "NonAdaptiveEAClassicalStrategy",
    "NonAdaptivityReport",
    "PrepareMeasureStrategy",
    "ProductMeasurement",
    "QuantumMessageStrategy",
    "save_strategy",
    "SequentialMeasurement",
    "Strategy",
    "STRATEGY_SCHEMA",
    "strategy_from_dict",
    "strategy_to_dict",
]
