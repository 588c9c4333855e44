"""Report formatting: plain text for people, canonical JSON for machines.

Both renderings leave ``elapsed_ms`` out unless timing is requested, so two
runs with the same inputs print byte-identical reports.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from novconf.models.report import CheckResult, RunReport, ScenarioReport

INDENT = "  "


def canonical_json(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def content_hash(payload: dict[str, Any]) -> str:
    """sha256 of the canonical encoding; excludes any existing ``content_hash`` key."""
    body = {k: v for k, v in payload.items() if k != "content_hash"}
    return hashlib.sha256(canonical_json(body).encode("utf-8")).hexdigest()


def report_payload(report: RunReport, *, timing: bool = False) -> dict[str, Any]:
    """The JSON-ready dict of a run, plus its content hash."""
    exclude = None if timing else {"scenarios": {"__all__": {"elapsed_ms"}}}
    payload: dict[str, Any] = report.model_dump(mode="json", exclude=exclude)
    payload["content_hash"] = content_hash(payload)
    return payload


def render_json(report: RunReport, *, timing: bool = False) -> str:
    return json.dumps(report_payload(report, timing=timing), sort_keys=True, indent=2, ensure_ascii=False)


def _format_value(value: object) -> str:
    if isinstance(value, list):
        return ",".join(str(v) for v in value)
    return str(value)


def _format_check(check: CheckResult) -> list[str]:
    params = " ".join(f"{k}={_format_value(v)}" for k, v in sorted(check.parameters.items()))
    lines = [f"{INDENT}[{check.status}] {check.name}" + (f"  {params}" if params else "")]
    if check.detail:
        lines.append(f"{INDENT * 3}{check.detail}")
    for key, value in sorted(check.artifacts.items()):
        if isinstance(value, list):
            if not value:
                continue
            lines.append(f"{INDENT * 3}{key}:")
            lines.extend(f"{INDENT * 4}{item}" for item in value)
        else:
            lines.append(f"{INDENT * 3}{key}: {value}")
    return lines


def _format_scenario(scenario: ScenarioReport, *, timing: bool) -> list[str]:
    params = " ".join(f"{k}={_format_value(v)}" for k, v in sorted(scenario.parameters.items()))
    header = f"== {scenario.scenario} [{scenario.status}] seed={scenario.seed}"
    if params:
        header += f" {params}"
    if timing:
        header += f" elapsed_ms={scenario.elapsed_ms}"
    lines = [header]
    lines.extend(f"{INDENT}window {w.label()}" for w in scenario.windows)
    for check in scenario.checks:
        lines.extend(_format_check(check))
    return lines


def render_text(report: RunReport, *, timing: bool = False) -> str:
    """Human-readable report: one block per scenario, one line per check."""
    failed = sum(1 for s in report.scenarios for c in s.checks if not c.passed)
    lines = [
        f"run {report.source} seed={report.seed} status={report.status} "
        f"checks={report.check_count} failed={failed}"
    ]
    for scenario in report.scenarios:
        lines.extend(_format_scenario(scenario, timing=timing))
    return "\n".join(lines) + "\n"
