from __future__ import annotations

import argparse
import json
import os
from pathlib import Path
from typing import Any

from eacomm.npa import build_moment_matrix
from eacomm.npa import EA_SCENARIOS
from eacomm.npa import EAScenario
from eacomm.npa import export_sdpa
from eacomm.npa import objective_from_functional
from eacomm.npa import solve_sdp
from eacomm.optimizer import maximize
from eacomm.optimizer import OptimizerConfig
from eacomm.optimizer import StrategyAnsatz
from eacomm.protocol import AdaptiveEAClassicalStrategy
from eacomm.protocol import behavior_of
from eacomm.protocol import check_nonadaptive
from eacomm.protocol import lift_to_adaptive
from eacomm.protocol import load_strategy
from eacomm.protocol import NonAdaptiveEAClassicalStrategy
from eacomm.protocol import save_strategy
from eacomm.strategies import build_strategy
from eacomm.tasks import classical_bound
from eacomm.tasks import evaluate
from eacomm.tasks import facet_functional
from eacomm.tasks import LinearFunctional
from eacomm.tasks import mesd_functional
from eacomm.tasks import rac_functional


TASKS = ("rac", "facet", "mesd")
SEED_VARIABLE = "EACOMM_SEED"


def resolve_seed(seed: int | None) -> int | None:
    """``seed`` if given, else the ``EACOMM_SEED`` environment variable, else ``None``."""
    if seed is not None:
        return seed
    value = os.environ.get(SEED_VARIABLE)
    if value is None or value == "":
        return None
    try:
        return int(value)
    except ValueError as e:
        raise ValueError(f"{SEED_VARIABLE} must be an integer, got '{value}'.") from e


def parse_level(text: str) -> int | str:
    if text == "1+AB":
        return text
    try:
        level = int(text)
    except ValueError:
        level = 0
    if level < 1:
        raise argparse.ArgumentTypeError(f"level must be a positive integer or '1+AB': {text}")
    return level


def task_functional(task: str, num_states: int = 4) -> LinearFunctional:
    """A named task, or a functional JSON document when ``task`` is a path."""
    if task == "rac":
        return rac_functional()
    if task == "facet":
        return facet_functional()
    if task == "mesd":
        return mesd_functional(num_states)
    path = Path(task)
    if not path.is_file():
        raise ValueError(f"Unknown task '{task}'. Choose from {TASKS} or give a functional file.")
    with open(path) as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"{path} is not valid JSON: {e}") from e
    return LinearFunctional.from_dict(data)


def _emit(args: argparse.Namespace, text: str, data: dict[str, Any]) -> None:
    print(text)
    if getattr(args, "json", None):
        with open(args.json, "w") as f:
            json.dump(data, f, indent=2)


def run_eval(args: argparse.Namespace) -> int:
    behavior = behavior_of(load_strategy(args.strategy))
    f = task_functional(args.task, behavior.num_inputs)
    value = evaluate(f, behavior)
    _emit(
        args,
        f"{f.name or args.task}: {value:.10f}",
        {"strategy": str(args.strategy), "task": f.name or args.task, "value": value},
    )
    return 0


def run_check(args: argparse.Namespace) -> int:
    strategy = load_strategy(args.strategy)
    if isinstance(strategy, NonAdaptiveEAClassicalStrategy):
        strategy = lift_to_adaptive(strategy)
    if not isinstance(strategy, AdaptiveEAClassicalStrategy):
        raise ValueError(f"check needs an EA classical strategy, got {type(strategy).__name__}.")
    report = check_nonadaptive(strategy, args.tol)
    _emit(
        args,
        f"max commutator norm: {report.max_commutator_norm:.3e}\n{report.verdict}",
        {
            "verdict": report.verdict,
            "max_commutator_norm": report.max_commutator_norm,
            "witness": list(report.witness) if report.witness is not None else None,
            "tol": report.tol,
        },
    )
    return 0


def run_strategy(args: argparse.Namespace) -> int:
    strategy = build_strategy(
        args.name,
        theta=args.theta,
        dim=args.dim,
        measurement_class=args.measurement_class,
        outcome_type=args.outcome_type,
    )
    save_strategy(strategy, args.out)
    _emit(
        args,
        f"Wrote {args.name} ({type(strategy).__name__}) to {args.out}",
        {"name": args.name, "kind": type(strategy).__name__, "path": str(args.out)},
    )
    return 0


def run_optimize(args: argparse.Namespace) -> int:
    f = task_functional(args.task, args.num_states)
    caps: dict[str, Any] = {}
    if args.local_dims is not None:
        caps["local_dims"] = tuple(args.local_dims)
    if args.message_dim is not None:
        caps["message_dim"] = args.message_dim
    if args.base_outcomes is not None:
        caps["base_outcomes"] = args.base_outcomes
    if args.num_kraus is not None:
        caps["num_kraus"] = args.num_kraus
    ansatz = StrategyAnsatz.for_functional(args.ansatz, f, **caps)
    cfg = OptimizerConfig(
        restarts=args.restarts, max_iters=args.max_iters, seed=resolve_seed(args.seed)
    )
    result = maximize(f, ansatz, cfg)
    if args.out is not None:
        result.save(args.out)
    _emit(
        args,
        f"{f.name} over {args.ansatz}: {result.value:.10f} ({result.iterations} iterations)",
        result.to_dict(),
    )
    return 0


def run_npa(args: argparse.Namespace) -> int:
    f = task_functional(args.task, args.num_states)
    scenario = EAScenario.for_functional(f, EA_SCENARIOS[args.scenario])
    moments = build_moment_matrix(scenario, args.level, args.nonadaptive, args.symmetrize)
    problem = objective_from_functional(f, moments)
    summary: dict[str, Any] = {
        "task": f.name,
        "scenario": args.scenario,
        "level": args.level,
        "nonadaptive": args.nonadaptive,
        "symmetrize": args.symmetrize,
        "size": problem.size,
        "variables": problem.num_variables,
    }
    if args.export is not None:
        export_sdpa(problem, args.export)
        _emit(
            args,
            f"Wrote a {problem.size}x{problem.size} SDP with {problem.num_variables} variables "
            f"to {args.export}",
            summary | {"export": str(args.export)},
        )
        return 0
    result = solve_sdp(problem, tol=args.tol, time_limit=args.time_limit)
    _emit(
        args,
        f"{f.name} bound: {result.value:.10f} (dual {result.dual_objective:.10f}, "
        f"gap {result.gap:.1e}, {result.status})",
        summary
        | {
            "value": result.value,
            "dual_objective": result.dual_objective,
            "gap": result.gap,
            "status": result.status,
            "iterations": result.iterations,
        },
    )
    return 0


def run_classical(args: argparse.Namespace) -> int:
    f = task_functional(args.task, args.num_states)
    rows = []
    for d in args.message_sizes:
        bound = classical_bound(f, d)
        encoding = [int(m) for m in bound.encoding]
        rows.append({"message_size": d, "value": float(bound.value), "encoding": encoding})
    lines = [f"{f.name} D={row['message_size']}: {row['value']:.10f}" for row in rows]
    _emit(args, "\n".join(lines), {"task": f.name, "bounds": rows})
    return 0


def run_behavior(args: argparse.Namespace) -> int:
    behavior = behavior_of(load_strategy(args.strategy))
    out = Path(args.out)
    if out.suffix == ".csv":
        behavior.to_csv(out)
    else:
        with open(out, "w") as f:
            json.dump(behavior.to_dict(), f, indent=2)
    _emit(args, f"Wrote behavior with dims {behavior.dims} to {out}", {"path": str(out)})
    return 0
