"""Tests for the command line and the reproduction report."""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
import time

import frontmatter
import pytest

from eacomm import __version__
from eacomm._errors import SchemaError
from eacomm.cli import main
from eacomm.cli import report
from eacomm.cli import report_rows
from eacomm.cli import ReportConfig
from eacomm.cli import resolve_seed
from eacomm.cli import RowSpec
from eacomm.cli import run_report
from eacomm.cli import SECTIONS
from eacomm.npa import read_sdpa
from eacomm.protocol import Behavior
from eacomm.tasks import evaluate
from eacomm.tasks import facet_functional


ADAPTIVE_TRIT_RAC = (3 + 1 / math.sqrt(2)) / 4


def _write_strategy(tmp_path: Path, name: str) -> Path:
    path = tmp_path / f"{name}.json"
    assert main(["strategy", name, "--out", str(path)]) == 0
    return path


def _constant(value: float | None, delay: float = 0.0) -> RowSpec:
    def compute(cfg: ReportConfig, out_dir: Path) -> tuple[float | None, str]:
        time.sleep(delay)
        return value, "constant"

    return RowSpec("classical", "const", f"{value}", "constant", "bound", 1.0, "1", compute)


class TestEval:
    """Strategy files scored on the command line."""

    @pytest.mark.parametrize(
        "name,task,expected",
        [
            ("adaptive-ea-trit-rac", "rac", "0.9267766953"),
            ("facet-qubit-povm", "facet", "2.2500000000"),
            ("ea-bit-rac", "rac", "0.8535533906"),
        ],
    )
    def test_values(
        self,
        tmp_path: Path,
        capsys: pytest.CaptureFixture[str],
        name: str,
        task: str,
        expected: str,
    ) -> None:
        path = _write_strategy(tmp_path, name)
        capsys.readouterr()
        assert main(["eval", "--strategy", str(path), "--task", task]) == 0
        assert expected in capsys.readouterr().out

    def test_json_output(self, tmp_path: Path) -> None:
        path = _write_strategy(tmp_path, "adaptive-ea-trit-rac")
        out = tmp_path / "value.json"
        assert main(["--json", str(out), "eval", "--strategy", str(path), "--task", "rac"]) == 0
        data = json.loads(out.read_text())
        assert data["value"] == pytest.approx(ADAPTIVE_TRIT_RAC, abs=1e-9)

    def test_malformed_json(self, tmp_path: Path) -> None:
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["eval", "--strategy", str(path), "--task", "rac"]) == 2

    def test_missing_file(self, tmp_path: Path) -> None:
        path = tmp_path / "absent.json"
        assert main(["eval", "--strategy", str(path), "--task", "rac"]) == 2

    def test_invariant_violation(self, tmp_path: Path) -> None:
        path = _write_strategy(tmp_path, "adaptive-ea-trit-rac")
        data = json.loads(path.read_text())
        data["alice"][0]["elements"][0][0][0][0] += 0.5
        path.write_text(json.dumps(data))
        assert main(["eval", "--strategy", str(path), "--task", "rac"]) == 3

    def test_unknown_task(self, tmp_path: Path) -> None:
        path = _write_strategy(tmp_path, "ea-bit-rac")
        assert main(["eval", "--strategy", str(path), "--task", "nope"]) == 2

    def test_functional_file(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = _write_strategy(tmp_path, "facet-qubit-povm")
        task = tmp_path / "facet.json"
        task.write_text(json.dumps(facet_functional().to_dict()))
        capsys.readouterr()
        assert main(["eval", "--strategy", str(path), "--task", str(task)]) == 0
        assert "2.2500000000" in capsys.readouterr().out


class TestCheck:
    """Adaptivity verdicts, lifting non-adaptive files first."""

    @pytest.mark.parametrize(
        "name,verdict",
        [
            ("adaptive-ea-trit-rac", "ADAPTIVE"),
            ("na-ea-trit-rac", "NON-ADAPTIVE"),
            ("facet-ea-bit-simulation", "ADAPTIVE"),
        ],
    )
    def test_verdicts(self, tmp_path: Path, name: str, verdict: str) -> None:
        path = _write_strategy(tmp_path, name)
        out = tmp_path / "check.json"
        assert main(["--json", str(out), "check", "--strategy", str(path)]) == 0
        assert json.loads(out.read_text())["verdict"] == verdict

    def test_lifted_norm(self, tmp_path: Path) -> None:
        path = _write_strategy(tmp_path, "na-ea-trit-rac")
        out = tmp_path / "check.json"
        assert main(["--json", str(out), "check", "--strategy", str(path)]) == 0
        assert json.loads(out.read_text())["max_commutator_norm"] < 1e-10

    def test_wrong_kind(self, tmp_path: Path) -> None:
        path = _write_strategy(tmp_path, "facet-qubit-povm")
        assert main(["check", "--strategy", str(path)]) == 2


class TestCommands:
    def test_unknown_strategy(self, tmp_path: Path) -> None:
        assert main(["strategy", "nope", "--out", str(tmp_path / "s.json")]) == 2

    def test_strategy_options(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = tmp_path / "na.json"
        args = ["strategy", "na-ea-trit-rac", "--theta", str(math.pi / 4), "--out", str(path)]
        assert main(args) == 0
        capsys.readouterr()
        assert main(["eval", "--strategy", str(path), "--task", "rac"]) == 0
        expected = (5 + 3 * math.sqrt(2) / 2) / 8
        assert f"{expected:.10f}" in capsys.readouterr().out

    def test_bad_theta(self, tmp_path: Path) -> None:
        args = ["strategy", "na-ea-trit-rac", "--theta", "2.0", "--out", str(tmp_path / "s.json")]
        assert main(args) == 2

    def test_behavior_csv(self, tmp_path: Path) -> None:
        path = _write_strategy(tmp_path, "facet-qubit-povm")
        out = tmp_path / "behavior.csv"
        assert main(["behavior", "--strategy", str(path), "--out", str(out)]) == 0
        behavior = Behavior.from_csv(out)
        assert evaluate(facet_functional(), behavior) == pytest.approx(2.25, abs=1e-12)

    def test_behavior_json(self, tmp_path: Path) -> None:
        path = _write_strategy(tmp_path, "ea-bit-rac")
        out = tmp_path / "behavior.json"
        assert main(["behavior", "--strategy", str(path), "--out", str(out)]) == 0
        behavior = Behavior.from_dict(json.loads(out.read_text()))
        assert behavior.dims == (4, 2, 2)

    def test_classical(self, tmp_path: Path) -> None:
        out = tmp_path / "classical.json"
        args = ["--json", str(out), "classical", "--task", "rac", "--message-sizes", "2", "3"]
        assert main(args) == 0
        bounds = json.loads(out.read_text())["bounds"]
        assert [b["message_size"] for b in bounds] == [2, 3]
        assert bounds[0]["value"] == pytest.approx(0.75, abs=1e-12)
        assert bounds[1]["value"] == pytest.approx(0.875, abs=1e-12)

    def test_optimize(self, tmp_path: Path) -> None:
        out = tmp_path / "result.json"
        args = [
            "optimize",
            "--task",
            "facet",
            "--class",
            "qubit-povm",
            "--restarts",
            "2",
            "--seed",
            "0",
            "--out",
            str(out),
        ]
        assert main(args) == 0
        data = json.loads(out.read_text())
        assert data["ansatz"]["tag"] == "qubit-povm"
        assert data["value"] <= 2.25 + 1e-9

    def test_optimize_unknown_class(self) -> None:
        assert main(["optimize", "--task", "rac", "--class", "nope", "--restarts", "1"]) == 2

    def test_npa_export(self, tmp_path: Path) -> None:
        path = tmp_path / "facet.dat-s"
        args = ["npa", "--task", "facet", "--level", "1+AB", "--export", str(path)]
        assert main(args) == 0
        problem = read_sdpa(path)
        assert problem.size > 1
        assert problem.num_variables > 0

    def test_npa_solve(self, tmp_path: Path) -> None:
        out = tmp_path / "npa.json"
        args = ["--json", str(out), "npa", "--task", "facet", "--level", "1", "--solve"]
        assert main(args) == 0
        data = json.loads(out.read_text())
        assert data["value"] >= 2.25 - 1e-6
        assert data["level"] == 1

    @pytest.mark.parametrize(
        "args",
        [
            ["npa", "--task", "rac", "--level", "0"],
            ["npa", "--task", "rac", "--level", "two"],
            ["npa", "--task", "rac", "--scenario", "ea-qubit"],
            ["npa", "--task", "rac", "--export", "x.dat-s", "--solve"],
            ["report", "--sections", "figures"],
            [],
        ],
    )
    def test_usage_errors(self, args: list[str]) -> None:
        assert main(args) == 2

    def test_version(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["--version"]) == 0
        assert capsys.readouterr().out.strip() == f"eacomm {__version__}"

    def test_logging_handler_is_replaced(self, tmp_path: Path) -> None:
        main(["-v", "classical", "--task", "rac", "--message-sizes", "2"])
        main(["-vv", "classical", "--task", "rac", "--message-sizes", "2"])
        logger = logging.getLogger("eacomm")
        assert len([h for h in logger.handlers if isinstance(h, logging.StreamHandler)]) == 1
        assert logger.level == logging.DEBUG


class TestReportConfig:
    def test_yaml(self, tmp_path: Path) -> None:
        path = tmp_path / "report.yml"
        path.write_text("seed: 3\nrestarts: 5\nsections: [classical]\n")
        cfg = ReportConfig.from_yaml(path)
        assert cfg == ReportConfig(seed=3, restarts=5, sections=("classical",))

    def test_unknown_key(self, tmp_path: Path) -> None:
        path = tmp_path / "report.yml"
        path.write_text("seeds: 3\n")
        with pytest.raises(SchemaError):
            ReportConfig.from_yaml(path)

    def test_not_a_mapping(self, tmp_path: Path) -> None:
        path = tmp_path / "report.yml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(SchemaError):
            ReportConfig.from_yaml(path)

    def test_validation(self) -> None:
        with pytest.raises(ValueError):
            ReportConfig(sections=("figures",))
        with pytest.raises(ValueError):
            ReportConfig(jobs=0)

    def test_merged_skips_none(self) -> None:
        cfg = ReportConfig(seed=3).merged(seed=None, restarts=7)
        assert cfg.seed == 3
        assert cfg.restarts == 7

    def test_seed_from_environment(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("EACOMM_SEED", "11")
        assert resolve_seed(None) == 11
        assert resolve_seed(5) == 5
        monkeypatch.setenv("EACOMM_SEED", "eleven")
        with pytest.raises(ValueError):
            resolve_seed(None)
        monkeypatch.delenv("EACOMM_SEED")
        assert resolve_seed(None) is None


class TestReport:
    """The reproduction table, its files and its exit status."""

    def test_rows_cover_every_section(self) -> None:
        specs = report_rows()
        assert {spec.section for spec in specs} == set(SECTIONS)
        assert len(specs) == 20

    def test_ungated_npa_rows(self) -> None:
        specs = [s for s in report_rows() if s.section == "npa" and not s.gate]
        ungated = [(s.task, s.resource) for s in specs]
        assert (facet_functional().name, "EA bit, adaptive") in ungated
        assert len(ungated) == 2

    def test_fast_sections(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.delenv("EACOMM_SEED", raising=False)
        out = tmp_path / "report.md"
        assert main(["report", "--out", str(out), "--sections", "strategy", "classical"]) == 0
        post = frontmatter.load(out)
        assert post["seed"] == 0
        assert post["status"] == "pass"
        assert "version" in post.keys()
        assert "|Task|" in post.content.replace(" ", "")

        document = json.loads(out.with_suffix(".json").read_text())
        assert document["schema"] == "eacomm/report/v1"
        rows = document["rows"]
        assert len(rows) == 13
        assert all(row["status"] == "pass" for row in rows)
        by_resource = {(row["task"], row["resource"]): row for row in rows}
        assert by_resource[("facet", "classical bit")]["value"] == pytest.approx(2.0)
        trit = by_resource[("rac-2", "EA trit, adaptive")]
        assert trit["value"] == pytest.approx(0.926777, abs=1e-6)
        assert trit["reference_label"] == "0.9268"
        unassisted = by_resource[("rac-2", "qubit, unassisted")]
        assert unassisted["value"] == pytest.approx(0.853553, abs=1e-6)

    def test_seed_fallback(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("EACOMM_SEED", "7")
        out = tmp_path / "report.md"
        assert main(["report", "--out", str(out), "--sections", "classical"]) == 0
        assert frontmatter.load(out)["seed"] == 7

    def test_config_file(self, tmp_path: Path) -> None:
        config = tmp_path / "report.yml"
        config.write_text("seed: 4\nsections: [classical]\n")
        out = tmp_path / "report.md"
        assert main(["report", "--out", str(out), "--config", str(config), "--seed", "9"]) == 0
        document = json.loads(out.with_suffix(".json").read_text())
        assert document["seed"] == 9
        assert len(document["rows"]) == 3

    def test_order_is_fixed(self, tmp_path: Path) -> None:
        specs = [_constant(1.0, 0.2), _constant(2.0, 0.1), _constant(1.0, 0.0)]
        sequential = run_report(ReportConfig(sections=("classical",)), tmp_path, specs)
        parallel = run_report(ReportConfig(sections=("classical",), jobs=3), tmp_path, specs)
        assert [row.resource for row in parallel] == [row.resource for row in sequential]
        assert [row.status for row in parallel] == ["pass", "FAIL", "pass"]

    def test_statuses(self, tmp_path: Path) -> None:
        def broken(cfg: ReportConfig, out_dir: Path) -> tuple[float | None, str]:
            raise RuntimeError("boom")

        specs = [
            _constant(None),
            RowSpec("classical", "t", "r", "m", "bound", 1.0, "1", broken),
            RowSpec(
                "classical", "t", "r", "m", "bound", 1.0, "1", _constant(5.0).compute, gate=False
            ),
        ]
        rows = run_report(ReportConfig(), tmp_path, specs)
        assert [row.status for row in rows] == ["export-only", "error", "info"]
        assert "boom" in rows[1].note
        assert rows[2].delta == pytest.approx(4.0)

    def test_mismatch_exit_code(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr("eacomm.cli._report.report_rows", lambda: [_constant(1.5)])
        out = tmp_path / "report.md"
        assert report(ReportConfig(seed=0), out) == 1
        assert frontmatter.load(out)["status"] == "fail"
        assert json.loads(out.with_suffix(".json").read_text())["rows"][0]["status"] == "FAIL"
