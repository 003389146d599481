from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import fields
from dataclasses import replace
import json
import math
from pathlib import Path
from typing import Any
from typing import Callable

import frontmatter
from mdutils.mdutils import MdUtils
import optuna
import yaml

from eacomm import __version__
from eacomm._errors import SchemaError
from eacomm._errors import SolverError
from eacomm.cli._commands import resolve_seed
from eacomm.npa import build_moment_matrix
from eacomm.npa import EAScenario
from eacomm.npa import export_sdpa
from eacomm.npa import objective_from_functional
from eacomm.npa import solve_sdp
from eacomm.optimizer import maximize
from eacomm.optimizer import OptimizerConfig
from eacomm.optimizer import StrategyAnsatz
from eacomm.protocol import behavior_of
from eacomm.strategies import build_strategy
from eacomm.tasks import classical_bound
from eacomm.tasks import evaluate
from eacomm.tasks import facet_functional
from eacomm.tasks import LinearFunctional
from eacomm.tasks import mesd_functional
from eacomm.tasks import rac_functional


_logger = optuna.logging.get_logger(__name__)

REPORT_SCHEMA = "eacomm/report/v1"
SECTIONS = ("strategy", "classical", "optimizer", "npa")


@dataclass(frozen=True)
class ReportConfig:
    """Settings of the reproduction report.

    Args:
        seed:
            Optimizer seed. Falls back to ``EACOMM_SEED`` and then to 0.
        restarts:
            Restarts of every optimizer row.
        npa_level:
            Hierarchy level of the NPA rows.
        npa_timeout:
            Wall-clock limit of every NPA solve in seconds; rows that hit it are exported.
        jobs:
            Rows computed in parallel.
        sections:
            Row groups to run, a subset of ``SECTIONS``.
    """

    seed: int | None = None
    restarts: int = 50
    npa_level: int | str = 2
    npa_timeout: float | None = None
    jobs: int = 1
    sections: tuple[str, ...] = SECTIONS

    def __post_init__(self) -> None:
        object.__setattr__(self, "sections", tuple(self.sections))
        unknown = set(self.sections) - set(SECTIONS)
        if unknown:
            raise ValueError(f"Unknown report sections {sorted(unknown)}; choose from {SECTIONS}.")
        if self.restarts < 1 or self.jobs < 1:
            raise ValueError("restarts and jobs must be positive.")

    @classmethod
    def from_yaml(cls, path: str | Path) -> ReportConfig:
        with open(path) as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise SchemaError(f"{path} must hold a mapping of report settings.")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise SchemaError(f"Unknown report settings {sorted(unknown)} in {path}.")
        return cls(**data)

    def merged(self, **overrides: Any) -> ReportConfig:
        """Copy with every override that is not ``None`` applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


@dataclass(frozen=True)
class ReportRow:
    task: str
    resource: str
    method: str
    role: str
    value: float | None
    reference: float
    reference_label: str
    status: str
    note: str = ""

    @property
    def delta(self) -> float | None:
        return None if self.value is None else abs(self.value - self.reference)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self) | {"delta": self.delta}


Compute = Callable[[ReportConfig, Path], tuple[float | None, str]]


@dataclass(frozen=True)
class RowSpec:
    """One line of the report.

    ``role`` is ``"achieved"`` for values of explicit strategies and ``"bound"`` for bounds.
    The row passes when ``reference − below ≤ value ≤ reference + above``; rows with ``gate=False``
    are reported without a verdict.
    """

    section: str
    task: str
    resource: str
    method: str
    role: str
    reference: float
    reference_label: str
    compute: Compute
    below: float = 1e-9
    above: float = 1e-9
    gate: bool = True


def _strategy_value(f: LinearFunctional, name: str, **options: object) -> Compute:
    def compute(cfg: ReportConfig, out_dir: Path) -> tuple[float | None, str]:
        return evaluate(f, behavior_of(build_strategy(name, **options))), name

    return compute


def _classical_value(f: LinearFunctional, message_size: int) -> Compute:
    def compute(cfg: ReportConfig, out_dir: Path) -> tuple[float | None, str]:
        return classical_bound(f, message_size).value, f"D={message_size}"

    return compute


def _optimized_value(f: LinearFunctional, tag: str) -> Compute:
    def compute(cfg: ReportConfig, out_dir: Path) -> tuple[float | None, str]:
        ansatz = StrategyAnsatz.for_functional(tag, f)
        result = maximize(f, ansatz, OptimizerConfig(restarts=cfg.restarts, seed=cfg.seed))
        return result.value, f"{tag}, {cfg.restarts} restarts"

    return compute


def _npa_value(
    f: LinearFunctional, message_size: int, nonadaptive: bool, symmetrize: bool, slug: str
) -> Compute:
    def compute(cfg: ReportConfig, out_dir: Path) -> tuple[float | None, str]:
        scenario = EAScenario.for_functional(f, message_size)
        moments = build_moment_matrix(scenario, cfg.npa_level, nonadaptive, symmetrize)
        problem = objective_from_functional(f, moments)
        note = f"level {cfg.npa_level}, {problem.size}x{problem.size}"
        try:
            return solve_sdp(problem, time_limit=cfg.npa_timeout).value, note
        except (SolverError, ValueError) as e:
            path = out_dir / f"{slug}.dat-s"
            export_sdpa(problem, path)
            _logger.warning(f"NPA row '{slug}' downgraded to export-only: {e}")
            return None, f"{note}, exported to {path.name}"

    return compute


def _strategy_row(
    f: LinearFunctional, resource: str, target: float, label: str, name: str, **options: object
) -> RowSpec:
    compute = _strategy_value(f, name, **options)
    return RowSpec(
        "strategy", f.name, resource, "construction", "achieved", target, label, compute
    )


def _classical_row(
    f: LinearFunctional, resource: str, target: float, label: str, d: int
) -> RowSpec:
    compute = _classical_value(f, d)
    return RowSpec("classical", f.name, resource, "brute force", "bound", target, label, compute)


def report_rows() -> list[RowSpec]:
    """The reproduced resource comparison, in table order."""
    rac = rac_functional()
    facet = facet_functional()
    ebit = (1 + 1 / math.sqrt(2)) / 2
    trit = (3 + 1 / math.sqrt(2)) / 4
    return [
        _classical_row(rac, "classical bit", 0.75, "3/4", 2),
        _classical_row(rac, "classical trit", 0.875, "7/8", 3),
        _strategy_row(rac, "qubit, unassisted", ebit, "(1+1/√2)/2", "unassisted-qubit-rac"),
        _strategy_row(rac, "EA bit", ebit, "(1+1/√2)/2", "ea-bit-rac"),
        _strategy_row(
            rac,
            "EA trit, non-adaptive (θ=π/4)",
            (5 + 3 * math.sqrt(2) / 2) / 8,
            "(5+3√2/2)/8",
            "na-ea-trit-rac",
            theta=math.pi / 4,
        ),
        _strategy_row(
            rac,
            "EA trit, non-adaptive (tilted)",
            (5 + math.sqrt(5)) / 8,
            "(5+√5)/8",
            "na-ea-trit-rac",
        ),
        _strategy_row(rac, "EA trit, adaptive", trit, "0.9268", "adaptive-ea-trit-rac"),
        _strategy_row(rac, "EA qubit, product decoding", 1.0, "1", "stochastic-dense-coding-rac"),
        _classical_row(facet, "classical bit", 2.0, "2", 2),
        _strategy_row(facet, "qubit, POVM", 2.25, "9/4", "facet-qubit-povm"),
        _strategy_row(facet, "qubit, projective", math.sqrt(5), "√5", "facet-qubit-projective"),
        _strategy_row(facet, "EA bit, adaptive", 2.25, "9/4", "facet-ea-bit-simulation"),
        _strategy_row(mesd_functional(4), "EA qubit, joint decoding", 1.0, "1", "dense-coding"),
        RowSpec(
            "optimizer",
            facet.name,
            "qubit, POVM",
            "optimizer",
            "achieved",
            2.25,
            "9/4",
            _optimized_value(facet, "qubit-povm"),
            below=1e-4,
            above=math.inf,
        ),
        RowSpec(
            "optimizer",
            facet.name,
            "qubit, projective",
            "optimizer",
            "achieved",
            math.sqrt(5),
            "√5",
            _optimized_value(facet, "qubit-projective"),
            below=1e-4,
            above=1e-6,
        ),
        RowSpec(
            "optimizer",
            rac.name,
            "EA trit, adaptive",
            "optimizer",
            "achieved",
            0.9268,
            "0.9268",
            _optimized_value(rac, "ea-trit-adaptive"),
            below=1e-3,
            above=math.inf,
        ),
        # Level 2 stops near 2.2536 and level 3 exceeds the dense solver; reported only.
        RowSpec(
            "npa",
            facet.name,
            "EA bit, adaptive",
            "NPA",
            "bound",
            2.25,
            "9/4",
            _npa_value(facet, 2, False, False, "facet-ea-bit-adaptive"),
            gate=False,
        ),
        RowSpec(
            "npa",
            facet.name,
            "EA bit, non-adaptive",
            "NPA",
            "bound",
            math.sqrt(5),
            "√5",
            _npa_value(facet, 2, True, False, "facet-ea-bit-nonadaptive"),
            below=1e-3,
            above=1e-3,
        ),
        RowSpec(
            "npa",
            rac.name,
            "EA trit, non-adaptive",
            "NPA",
            "bound",
            0.9082,
            "0.9082",
            _npa_value(rac, 3, True, True, "rac-ea-trit-nonadaptive"),
            below=1e-3,
            above=1e-3,
        ),
        # Plain NPA may sit above the optimum here; the value is reported without a verdict.
        RowSpec(
            "npa",
            rac.name,
            "EA bit, adaptive",
            "NPA",
            "bound",
            ebit,
            "(1+1/√2)/2",
            _npa_value(rac, 2, False, False, "rac-ea-bit-adaptive"),
            gate=False,
        ),
    ]


def run_row(spec: RowSpec, cfg: ReportConfig, out_dir: Path) -> ReportRow:
    try:
        value, note = spec.compute(cfg, out_dir)
    except Exception as e:
        _logger.warning(f"Row ({spec.task}, {spec.resource}) failed: {e}")
        value, note, status = None, f"{type(e).__name__}: {e}", "error"
    else:
        if value is None:
            status = "export-only"
        elif not spec.gate:
            status = "info"
        elif spec.reference - spec.below <= value <= spec.reference + spec.above:
            status = "pass"
        else:
            status = "FAIL"
    row = ReportRow(
        spec.task,
        spec.resource,
        spec.method,
        spec.role,
        None if value is None else float(value),
        spec.reference,
        spec.reference_label,
        status,
        note,
    )
    _logger.info(f"{row.task} | {row.resource} | {row.method}: {row.value} ({row.status}).")
    return row


def run_report(
    cfg: ReportConfig, out_dir: Path, specs: list[RowSpec] | None = None
) -> list[ReportRow]:
    """Compute the rows of the enabled sections, in table order whatever ``cfg.jobs`` is."""
    if specs is None:
        specs = report_rows()
    specs = [spec for spec in specs if spec.section in cfg.sections]
    if cfg.jobs == 1:
        return [run_row(spec, cfg, out_dir) for spec in specs]
    with ThreadPoolExecutor(max_workers=cfg.jobs) as executor:
        return list(executor.map(lambda spec: run_row(spec, cfg, out_dir), specs))


def _cell(value: float | None) -> str:
    return "–" if value is None else f"{value:.6f}"


def write_report(rows: list[ReportRow], cfg: ReportConfig, out: Path) -> bool:
    """Write ``out`` (markdown) and its ``.json`` sibling; return whether all gates pass."""
    ok = all(row.status not in ("FAIL", "error") for row in rows)
    status = "pass" if ok else "fail"
    gated = [row for row in rows if row.status in ("pass", "FAIL")]
    passed = sum(row.status == "pass" for row in gated)

    md = MdUtils(file_name=str(out.with_suffix("")), title="Resource comparison")
    md.new_paragraph(f"{passed} of {len(gated)} checks pass (seed {cfg.seed}).")
    header = [
        "Task", "Resource", "Method", "Achieved", "Bound", "Reference", "Δ", "Status", "Note"
    ]
    cells = list(header)
    for row in rows:
        cells.extend(
            [
                row.task,
                row.resource,
                row.method,
                _cell(row.value) if row.role == "achieved" else "–",
                _cell(row.value) if row.role == "bound" else "–",
                row.reference_label,
                "–" if row.delta is None else f"{row.delta:.1e}",
                row.status,
                row.note,
            ]
        )
    md.new_table(columns=len(header), rows=len(rows) + 1, text=cells, text_align="left")
    post = frontmatter.Post(
        md.get_md_text().lstrip(), seed=cfg.seed, version=__version__, status=status
    )
    out.write_text(frontmatter.dumps(post) + "\n")

    document = {
        "schema": REPORT_SCHEMA,
        "seed": cfg.seed,
        "version": __version__,
        "status": status,
        "config": asdict(cfg),
        "rows": [row.to_dict() for row in rows],
    }
    with open(out.with_suffix(".json"), "w") as f:
        json.dump(document, f, indent=2)
    return ok


def report(cfg: ReportConfig, out: Path) -> int:
    """Run the report; exit status 1 when a gated row fails."""
    seed = resolve_seed(cfg.seed)
    cfg = replace(cfg, seed=0 if seed is None else seed)
    out.parent.mkdir(parents=True, exist_ok=True)
    rows = run_report(cfg, out.parent)
    ok = write_report(rows, cfg, out)
    _logger.info(f"Report written to {out} ({'pass' if ok else 'fail'}).")
    return 0 if ok else 1
