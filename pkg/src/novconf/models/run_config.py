"""Resolved inputs of one CLI run."""

from __future__ import annotations

from enum import StrEnum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field


class ReportFormat(StrEnum):
    TEXT = "text"
    JSON = "json"


class RunConfig(BaseModel):
    """Exactly one input source plus the flags that shape the run."""

    scenario: str | None = None
    script: Path | None = None
    report_format: ReportFormat = ReportFormat.TEXT
    seed: int = Field(default=0, ge=0)
    timing: bool = False

    kmax: int = Field(default=8, ge=0)
    M: int = Field(default=1, ge=0)
    case: str | None = None
    r: int | None = None
    p: int | None = Field(default=None, ge=0)
    q: int | None = Field(default=None, ge=0)
    l: int | None = Field(default=None, ge=0)  # noqa: E741
    variant: str | None = None

    window: tuple[int, int] | None = None
    s_max: int | None = Field(default=None, ge=0)
    degree: int | None = Field(default=None, ge=0)
    pad_factor: int = Field(default=3, ge=0)

    def model_post_init(self, __context: Any) -> None:
        if (self.scenario is None) == (self.script is None):
            msg = "exactly one input source (scenario or script) is required"
            raise ValueError(msg)
        if self.window is not None and self.window[0] > self.window[1]:
            msg = f"window lo must not exceed hi, got {self.window[0]}:{self.window[1]}"
            raise ValueError(msg)

    @property
    def source(self) -> str:
        if self.script is not None:
            return f"script:{self.script}"
        return f"scenario:{self.scenario}"
