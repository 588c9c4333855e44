"""Report models. Per-check outcomes roll up into scenario and run reports.

A run is replayable from its report alone: the seed, scenario parameters and
every window used are part of the payload. Wall time is recorded but kept out
of rendered output unless asked for.
"""

from __future__ import annotations

from enum import StrEnum

from pydantic import BaseModel, Field, computed_field

from novconf.models.window import Window

ParamValue = str | int | list[int] | list[str]
ArtifactValue = str | list[str]


class CheckStatus(StrEnum):
    PASS = "pass"
    FAIL = "fail"


class CheckResult(BaseModel):
    """One verified statement: an identity, a certificate, a value."""

    name: str = Field(min_length=1)
    status: CheckStatus
    parameters: dict[str, ParamValue] = Field(default_factory=dict)
    artifacts: dict[str, ArtifactValue] = Field(default_factory=dict)
    detail: str = ""

    @classmethod
    def of(
        cls,
        name: str,
        ok: bool,
        *,
        parameters: dict[str, ParamValue] | None = None,
        artifacts: dict[str, ArtifactValue] | None = None,
        detail: str = "",
    ) -> CheckResult:
        return cls(
            name=name,
            status=CheckStatus.PASS if ok else CheckStatus.FAIL,
            parameters=parameters or {},
            artifacts=artifacts or {},
            detail=detail,
        )

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASS


class ScenarioReport(BaseModel):
    scenario: str = Field(min_length=1)
    seed: int = Field(default=0, ge=0)
    parameters: dict[str, ParamValue] = Field(default_factory=dict)
    windows: list[Window] = Field(default_factory=list)
    checks: list[CheckResult] = Field(default_factory=list)
    elapsed_ms: int = Field(default=0, ge=0)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def status(self) -> CheckStatus:
        if all(c.passed for c in self.checks):
            return CheckStatus.PASS
        return CheckStatus.FAIL

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASS

    def failed_checks(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]


class RunReport(BaseModel):
    """Everything one CLI invocation verified, in input order."""

    source: str = Field(min_length=1)
    seed: int = Field(default=0, ge=0)
    scenarios: list[ScenarioReport] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def status(self) -> CheckStatus:
        if all(s.passed for s in self.scenarios):
            return CheckStatus.PASS
        return CheckStatus.FAIL

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASS

    @property
    def check_count(self) -> int:
        return sum(len(s.checks) for s in self.scenarios)
