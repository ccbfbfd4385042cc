"""Test reports and their canonical byte form.

The canonical export is JSON with sorted keys, compact separators, and
failure rates rendered as exact two-decimal strings (round-half-even on the
true rational value, computed in integers so no binary-float artifact can
leak into the bytes). Identical reports export to identical bytes.
"""

import json
from dataclasses import dataclass, field
from typing import Any

from ..errors import ParseError, SchemaError

# Failed examples kept in the report body per test; the failure count is
# always the true total.
FAILED_EXAMPLE_CAP = 20


def format_rate(failures: int, total: int) -> str:
    """100 * failures / total as an exact two-decimal string (half-even ties)."""
    if total <= 0:
        return "0.00"
    hundredths, remainder = divmod(10000 * failures, total)
    if 2 * remainder > total or (2 * remainder == total and hundredths % 2 == 1):
        hundredths += 1
    return f"{hundredths // 100}.{hundredths % 100:02d}"


@dataclass(frozen=True)
class TestResult:
    name: str
    type: str
    capability: str
    total: int
    failures: int
    failed_examples: list[dict[str, Any]] = field(default_factory=list)

    @property
    def failure_rate(self) -> float:
        return 100.0 * self.failures / self.total if self.total else 0.0


@dataclass(frozen=True)
class TestReport:
    skill_id: str
    suite_name: str
    tests: list[TestResult]


def export_report(report: TestReport) -> bytes:
    payload = {
        "skill_id": report.skill_id,
        "suite_name": report.suite_name,
        "tests": [
            {
                "name": t.name,
                "type": t.type,
                "capability": t.capability,
                "total": t.total,
                "failures": t.failures,
                "failure_rate": format_rate(t.failures, t.total),
                "failed_examples": t.failed_examples,
            }
            for t in report.tests
        ],
    }
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def parse_report(data: bytes) -> TestReport:
    """Inverse of export_report; validates the formatted rates against the counts."""
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    if not isinstance(obj, dict) or not isinstance(obj.get("tests"), list):
        raise SchemaError("report must be an object with a tests list")
    tests = []
    for i, raw in enumerate(obj["tests"]):
        total = raw.get("total")
        failures = raw.get("failures")
        if not isinstance(total, int) or not isinstance(failures, int):
            raise SchemaError("total and failures must be integers", test=i)
        if raw.get("failure_rate") != format_rate(failures, total):
            raise SchemaError("failure_rate does not match failures/total", test=i)
        tests.append(
            TestResult(
                name=raw.get("name", ""),
                type=raw.get("type", ""),
                capability=raw.get("capability", ""),
                total=total,
                failures=failures,
                failed_examples=raw.get("failed_examples", []),
            )
        )
    return TestReport(skill_id=obj.get("skill_id", ""), suite_name=obj.get("suite_name", ""), tests=tests)
