from __future__ import annotations

from json import dumps
from platform import python_version
from typing import TYPE_CHECKING

from numpy import __version__ as numpy_version
from pandas import DataFrame
from scipy import __version__ as scipy_version
from tabulate import tabulate

from .. import __version__
from ..tools.rational import to_jsonable

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping
    from typing import Any


class Outcome:
    """What a subcommand measured, with the pass/fail rows of its assertions."""

    __slots__ = ("result", "checks")
    result: dict[str, Any]
    checks: list[dict[str, Any]]

    def __init__(self, result: Mapping[str, Any] | None = None, checks: Iterable[dict] = ()):
        self.result = dict(result or {})
        self.checks = list(checks)

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append({"check": name, "passed": bool(passed), "detail": detail})
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(row["passed"] for row in self.checks)


def versions() -> dict[str, str]:
    return {
        "leafcomm": __version__,
        "python": python_version(),
        "numpy": numpy_version,
        "scipy": scipy_version,
    }


def make_report(
    command: str, parameters: Mapping[str, Any], outcome: Outcome, wall_ms: float
) -> dict[str, Any]:
    """The JSON report; everything but `timing` depends only on the parameters and seed."""
    return {
        "command": command,
        "parameters": dict(parameters),
        "result": outcome.result,
        "checks": outcome.checks,
        "passed": outcome.passed,
        "versions": versions(),
        "timing": {"wall_ms": round(wall_ms, 3)},
    }


def dump_report(report: Mapping[str, Any]) -> str:
    return dumps(to_jsonable(report), sort_keys=True, indent=2)


def deterministic_part(report: Mapping[str, Any]) -> dict[str, Any]:
    return {key: value for key, value in report.items() if key != "timing"}


def _cell(value: Any) -> Any:
    value = to_jsonable(value)
    if isinstance(value, (dict, list)):
        return dumps(value, sort_keys=True)
    return value


def render_result(result: Mapping[str, Any]) -> str:
    rows = [(key, _cell(value)) for key, value in sorted(result.items())]
    return tabulate(rows, headers=("key", "value"), tablefmt="psql", disable_numparse=True)


def render_checks(checks: Iterable[Mapping[str, Any]]) -> str:
    df = DataFrame(list(checks), columns=["check", "passed", "detail"])
    return tabulate(tabular_data=df, headers="keys", tablefmt="psql", showindex=False)
