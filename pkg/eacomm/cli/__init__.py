from ._commands import parse_level
from ._commands import resolve_seed
from ._commands import SEED_VARIABLE
from ._commands import task_functional
from ._main import build_parser
from ._main import main
from ._report import report
from ._report import REPORT_SCHEMA
from ._report import report_rows
from ._report import ReportConfig
from ._report import ReportRow
from ._report import RowSpec
from ._report import run_report
from ._report import SECTIONS
from ._report import write_report


__all__ = [
    "build_parser",
    "main",
    "parse_level",
    "report",
    "REPORT_SCHEMA",
    "report_rows",
    "ReportConfig",
    "ReportRow",
    "resolve_seed",
    "RowSpec",
    "run_report",
    "SECTIONS",
    "SEED_VARIABLE",
    "task_functional",
    "write_report",
]
