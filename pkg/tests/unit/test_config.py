"""Unit tests for configuration loading."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from novconf.config import NovConfConfig, load_config


class TestNovConfConfig:
    def test_defaults(self):
        cfg = NovConfConfig()
        assert cfg.windows.pad_factor == 3
        assert cfg.windows.s_max == 2
        assert cfg.windows.max_multiplier_degree is None
        assert cfg.run.seed == 0
        assert cfg.run.report_format == "text"
        assert cfg.logging.level == "WARNING"

    def test_load_from_yaml(self, tmp_path: Path):
        config_file = tmp_path / "test.yaml"
        config_file.write_text("""
novconf:
  windows:
    pad_factor: 2
  run:
    report_format: json
    kmax: 4
""")
        cfg = load_config(config_file)
        assert cfg.windows.pad_factor == 2
        assert cfg.run.report_format == "json"
        assert cfg.run.kmax == 4
        # Defaults still apply for unspecified fields
        assert cfg.windows.s_max == 2
        assert cfg.run.M == 1

    def test_load_default_yaml(self):
        cfg = load_config(Path("config/default.yaml"))
        assert cfg == NovConfConfig()

    def test_missing_file_raises(self):
        with pytest.raises(FileNotFoundError, match="Config file not found"):
            load_config("/nonexistent/path.yaml")

    def test_none_path_returns_defaults(self):
        assert load_config(None).run.kmax == 8

    def test_empty_yaml_returns_defaults(self, tmp_path: Path):
        config_file = tmp_path / "empty.yaml"
        config_file.write_text("")
        assert load_config(config_file) == NovConfConfig()

    def test_unnested_yaml(self, tmp_path: Path):
        config_file = tmp_path / "flat.yaml"
        config_file.write_text("run:\n  seed: 11\n")
        assert load_config(config_file).run.seed == 11

    def test_bad_report_format(self, tmp_path: Path):
        config_file = tmp_path / "bad.yaml"
        config_file.write_text("novconf:\n  run:\n    report_format: xml\n")
        with pytest.raises(ValueError, match="report_format"):
            load_config(config_file)

    def test_bound_must_be_positive(self):
        with pytest.raises(ValidationError):
            NovConfConfig.model_validate({"run": {"M": 0}})
