from __future__ import annotations

from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field
import json
import math
from pathlib import Path
from typing import Any

import numpy as np
import optuna
from scipy import optimize

from eacomm.optimizer._ansatz import StrategyAnsatz
from eacomm.optimizer._models import Discrete
from eacomm.optimizer._models import StrategyModel
from eacomm.optimizer._problem import StrategyProblem
from eacomm.protocol import Strategy
from eacomm.protocol import strategy_to_dict
from eacomm.tasks import LinearFunctional


_logger = optuna.logging.get_logger(__name__)

RESULT_SCHEMA = "eacomm/optimization/v1"
METHOD = "L-BFGS-B (analytic gradient) alternating with discrete best response"


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings of :func:`maximize`.

    Args:
        restarts:
            Number of random starting points.
        max_iters:
            Iteration cap of each L-BFGS-B run.
        tolerance:
            Relative objective change at which L-BFGS-B stops (``ftol``).
        gradient_tolerance:
            Projected gradient size at which L-BFGS-B stops (``gtol``).
        max_rounds:
            Ascent and best-response alternations per restart.
        seed:
            Seed of the restart sampler. ``None`` draws fresh starting points.
    """

    restarts: int = 50
    max_iters: int = 1000
    tolerance: float = 1e-12
    gradient_tolerance: float = 1e-9
    max_rounds: int = 10
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.restarts < 1:
            raise ValueError(f"restarts must be at least 1, got {self.restarts}.")
        if self.max_iters < 1 or self.max_rounds < 1:
            raise ValueError("max_iters and max_rounds must be positive.")
        if self.tolerance <= 0.0 or self.gradient_tolerance <= 0.0:
            raise ValueError("Tolerances must be positive.")


@dataclass(frozen=True)
class RestartRecord:
    restart: int
    value: float
    iterations: int
    rounds: int


@dataclass
class OptimizationResult:
    value: float
    strategy: Strategy
    params: np.ndarray
    discrete: Discrete
    ansatz: StrategyAnsatz
    config: OptimizerConfig
    trace: list[RestartRecord] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return sum(record.iterations for record in self.trace)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": RESULT_SCHEMA,
            "value": self.value,
            "ansatz": {
                "tag": self.ansatz.tag,
                "local_dims": list(self.ansatz.local_dims),
                "message_dim": self.ansatz.message_dim,
                "base_outcomes": self.ansatz.base_outcomes,
                "num_kraus": self.ansatz.num_kraus,
            },
            "strategy": strategy_to_dict(self.strategy),
            "params": self.params.tolist(),
            "discrete": {key: value.tolist() for key, value in self.discrete.items()},
            "trace": [asdict(record) for record in self.trace],
            "metadata": {
                "method": METHOD,
                "iterations": self.iterations,
                "restarts": self.config.restarts,
                "seed": self.config.seed,
            },
        }

    def save(self, path: str | Path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)


def _same_discrete(a: Discrete, b: Discrete) -> bool:
    return a.keys() == b.keys() and all(np.array_equal(a[key], b[key]) for key in a)


def _ascend(
    model: StrategyModel, f: LinearFunctional, start: np.ndarray, cfg: OptimizerConfig
) -> tuple[float, np.ndarray, Discrete, int, int]:
    """Local ascent from ``start``; returns (value, params, discrete, iterations, rounds)."""
    params = start
    discrete = model.best_response(f, params)
    iterations = 0
    rounds = 0
    while rounds < cfg.max_rounds:
        rounds += 1

        def negative(theta: np.ndarray, choice: Discrete = discrete) -> tuple[float, np.ndarray]:
            value, grad = model.value_and_grad(f, theta, choice)
            return -value, -grad

        res = optimize.minimize(
            negative,
            x0=params,
            jac=True,
            method="L-BFGS-B",
            options={
                "maxiter": cfg.max_iters,
                "ftol": cfg.tolerance,
                "gtol": cfg.gradient_tolerance,
            },
        )
        iterations += int(res.nit)
        params = np.asarray(res.x, dtype=float)
        response = model.best_response(f, params)
        if _same_discrete(response, discrete):
            break
        discrete = response
    return model.value(f, params, discrete), params, discrete, iterations, rounds


def maximize(
    f: LinearFunctional, ansatz: StrategyAnsatz, cfg: OptimizerConfig | None = None
) -> OptimizationResult:
    """Best value of ``f`` found over ``cfg.restarts`` local ascents in the class ``ansatz``.

    Starting points are optuna trials drawn by a seeded :class:`~optuna.samplers.RandomSampler`
    uniformly on [−π, π] per coordinate. Restarts run in trial order; ties keep the lowest
    restart index.

    Raises:
        ValueError: ``f`` does not match the scenario of ``ansatz``.
    """
    cfg = cfg or OptimizerConfig()
    problem = StrategyProblem(f, ansatz)
    model = problem.model
    outcomes: dict[int, tuple[np.ndarray, Discrete]] = {}

    def objective(trial: optuna.Trial) -> float:
        start = np.array(
            [trial.suggest_float(name, -math.pi, math.pi) for name in problem.search_space]
        )
        value, params, discrete, iterations, rounds = _ascend(model, f, start, cfg)
        trial.set_user_attr("params", params.tolist())
        trial.set_user_attr("iterations", iterations)
        trial.set_user_attr("rounds", rounds)
        outcomes[trial.number] = (params, discrete)
        _logger.info(f"Restart {trial.number}: {value:.10f} ({iterations} iterations).")
        return value

    verbosity = optuna.logging.get_verbosity()
    optuna.logging.set_verbosity(optuna.logging.WARNING)
    try:
        study = optuna.create_study(
            direction="maximize", sampler=optuna.samplers.RandomSampler(seed=cfg.seed)
        )
        study.optimize(objective, n_trials=cfg.restarts)
    finally:
        optuna.logging.set_verbosity(verbosity)

    trials = sorted(study.trials, key=lambda t: t.number)
    trace = [
        RestartRecord(
            t.number, float(t.value), int(t.user_attrs["iterations"]), int(t.user_attrs["rounds"])
        )
        for t in trials
        if t.value is not None
    ]
    best = max(trace, key=lambda record: (record.value, -record.restart))
    params, discrete = outcomes[best.restart]
    _logger.info(f"Best of {len(trace)} restarts for '{ansatz.tag}': {best.value:.10f}.")
    return OptimizationResult(
        value=best.value,
        strategy=model.to_strategy(params, discrete),
        params=params,
        discrete=discrete,
        ansatz=ansatz,
        config=cfg,
        trace=trace,
    )


def gradient_check(
    ansatz: StrategyAnsatz,
    f: LinearFunctional,
    params: np.ndarray,
    discrete: Discrete | None = None,
    h: float = 1e-5,
) -> float:
    """Max |analytic − central difference| over all coordinates of the gradient."""
    model = ansatz.build_model()
    params = np.asarray(params, dtype=float)
    discrete = discrete if discrete is not None else model.default_discrete()
    _, grad = model.value_and_grad(f, params, discrete)
    deviation = 0.0
    for i in range(params.size):
        step = np.zeros_like(params)
        step[i] = h
        numeric = model.value(f, params + step, discrete) - model.value(f, params - step, discrete)
        deviation = max(deviation, abs(grad[i] - numeric / (2.0 * h)))
    return float(deviation)
