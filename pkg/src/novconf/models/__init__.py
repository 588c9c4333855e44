"""Value objects shared by the harness and the CLI."""

from novconf.models.report import (
    CheckResult,
    CheckStatus,
    RunReport,
    ScenarioReport,
)
from novconf.models.run_config import ReportFormat, RunConfig
from novconf.models.window import Window

__all__ = [
    "CheckResult",
    "CheckStatus",
    "ReportFormat",
    "RunConfig",
    "RunReport",
    "ScenarioReport",
    "Window",
]
