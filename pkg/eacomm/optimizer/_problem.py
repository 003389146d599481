from __future__ import annotations

import math

import numpy as np
import optuna
import optunahub

from eacomm.optimizer._ansatz import StrategyAnsatz
from eacomm.optimizer._models import Discrete
from eacomm.tasks import LinearFunctional


class StrategyProblem(optunahub.benchmarks.BaseProblem):
    """A functional maximized over a strategy class, as an optuna benchmark problem.

    Every parameter of the class becomes a float variable ``theta{i}`` on [−π, π]. Discrete
    choices are filled in by best response, so any optuna sampler can search the class.
    """

    def __init__(self, f: LinearFunctional, ansatz: StrategyAnsatz) -> None:
        """Initialize the problem.
        Args:
            f: Functional to be maximized.
            ansatz: Strategy class whose scenario must match ``f``.
        """
        ansatz.check_functional(f)
        self.f = f
        self.ansatz = ansatz
        self.model = ansatz.build_model()
        self._search_space = {
            f"theta{i}": optuna.distributions.FloatDistribution(-math.pi, math.pi)
            for i in range(self.model.num_params)
        }

    @property
    def search_space(self) -> dict[str, optuna.distributions.BaseDistribution]:
        """Return the search space."""
        return self._search_space.copy()

    @property
    def directions(self) -> list[optuna.study.StudyDirection]:
        """Return the optimization directions."""
        return [optuna.study.StudyDirection.MAXIMIZE]

    def to_vector(self, params: dict[str, float]) -> np.ndarray:
        return np.array([params[name] for name in self._search_space], dtype=float)

    def discrete_for(self, theta: np.ndarray) -> Discrete:
        return self.model.best_response(self.f, theta)

    def evaluate(self, params: dict[str, float]) -> float:
        """Evaluate the functional.
        Args:
            params:
                Decision variable, e.g., evaluate({"theta0": 0.0, "theta1": 1.0}).
                The number of parameters must be equal to the size of the class.
        Returns:
            The functional value with best-response discrete choices.
        """
        theta = self.to_vector(params)
        return self.model.value(self.f, theta, self.discrete_for(theta))
