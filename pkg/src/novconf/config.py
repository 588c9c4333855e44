"""Configuration loading for novconf: YAML defaults layered under CLI flags."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, Field


class WindowDefaults(BaseModel):
    """Defaults used when a membership window is derived from its target."""

    pad_factor: int = Field(default=3, ge=0)
    s_max: int = Field(default=2, ge=0)
    max_multiplier_degree: int | None = Field(default=None, ge=0)


class RunDefaults(BaseModel):
    seed: int = Field(default=0, ge=0)
    report_format: str = "text"
    kmax: int = Field(default=8, ge=0)
    M: int = Field(default=1, ge=1)

    def model_post_init(self, __context: Any) -> None:
        if self.report_format not in ("text", "json"):
            msg = f"report_format must be 'text' or 'json', got {self.report_format!r}"
            raise ValueError(msg)


class LoggingConfig(BaseModel):
    level: str = "WARNING"


class NovConfConfig(BaseModel):
    """Root configuration for novconf."""

    windows: WindowDefaults = Field(default_factory=WindowDefaults)
    run: RunDefaults = Field(default_factory=RunDefaults)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)


def load_config(config_path: str | Path | None = None) -> NovConfConfig:
    """Load configuration from YAML file, falling back to defaults.

    Args:
        config_path: Path to YAML config file. If None, uses defaults.

    Returns:
        Validated NovConfConfig instance.
    """
    if config_path is None:
        return NovConfConfig()

    path = Path(config_path)
    if not path.exists():
        msg = f"Config file not found: {path}"
        raise FileNotFoundError(msg)

    with open(path, encoding="utf-8") as f:
        raw: dict[str, Any] = yaml.safe_load(f) or {}

    # Config may be nested under 'novconf' key
    if "novconf" in raw:
        raw = raw["novconf"] or {}

    return NovConfConfig.model_validate(raw)
