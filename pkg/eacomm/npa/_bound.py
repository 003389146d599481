from __future__ import annotations

import optuna

from eacomm.npa._moment import build_moment_matrix
from eacomm.npa._scenario import EAScenario
from eacomm.npa._sdp import objective_from_functional
from eacomm.npa._solver import solve_sdp
from eacomm.tasks import LinearFunctional


_logger = optuna.logging.get_logger(__name__)


def upper_bound(
    f: LinearFunctional,
    scenario: EAScenario | int,
    level: int | str = 2,
    nonadaptive: bool = False,
    symmetrize: bool = False,
    tol: float = 1e-7,
    time_limit: float | None = None,
) -> float:
    """NPA upper bound on ``f`` over EA classical strategies.

    Args:
        f:
            Functional to bound.
        scenario:
            An :class:`EAScenario` or the message alphabet size, which is completed from
            the dimensions of ``f``.
        level:
            Hierarchy level, a positive integer or ``"1+AB"``.
        nonadaptive:
            Bound non-adaptive strategies only.
        symmetrize:
            Merge moments related by relabeling the messages.
        tol:
            Solver tolerance.
        time_limit:
            Optional wall-clock limit of the solver in seconds.

    Raises:
        ValueError: Invalid arguments or a problem beyond the dense solver limits.
        SolverError: The solver did not converge.
    """
    if isinstance(scenario, int):
        scenario = EAScenario.for_functional(f, scenario)
    moments = build_moment_matrix(scenario, level, nonadaptive, symmetrize)
    result = solve_sdp(objective_from_functional(f, moments), tol=tol, time_limit=time_limit)
    kind = "non-adaptive" if nonadaptive else "adaptive"
    _logger.info(
        f"Bound on '{f.name}' for {kind} D={scenario.message_size} at level {level}: "
        f"{result.value:.8f}."
    )
    return result.value
