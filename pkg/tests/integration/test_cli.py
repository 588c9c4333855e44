"""Integration tests for the novconf command line: exit codes and report output."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from novconf.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, _glue_window, build_parser, main
from novconf.tools.report_formatter import content_hash

# ── Informational commands ─────────────────────────────────────────


class TestInfoCommands:
    def test_no_command_prints_help(self, capsys):
        assert main([]) == EXIT_PASS
        assert "novconf" in capsys.readouterr().out

    def test_list(self, capsys):
        assert main(["list"]) == EXIT_PASS
        out = capsys.readouterr().out
        for name in ("series00", "counterexample", "quadratic_np", "gelfand_demo"):
            assert name in out

    def test_schema(self, capsys):
        assert main(["schema"]) == EXIT_PASS
        schema = json.loads(capsys.readouterr().out)
        assert "scenarios" in schema["properties"]

    @pytest.mark.parametrize("flags", [["--window=-3:3"], ["--window", "-3:3"]])
    def test_negative_window(self, flags):
        args = build_parser().parse_args(_glue_window(["run", "case2", *flags]))
        assert args.window == (-3, 3)

    def test_separate_window_value_reaches_the_window_check(self, capsys):
        with pytest.raises(SystemExit):
            main(["run", "case2", "--window", "-3"])
        assert "expected lo:hi, got '-3'" in capsys.readouterr().err

    def test_bad_window(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["run", "case2", "--window=3"])


# ── run <scenario> ────────────────────────────────────────────────


class TestRunScenario:
    def test_counterexample_text(self, capsys):
        assert main(["run", "counterexample", "--kmax", "6"]) == EXIT_PASS
        out = capsys.readouterr().out
        assert out.startswith("run scenario:counterexample seed=0 status=pass")
        assert "locality_sequence: 1,3,5,7,9,11,13" in out
        assert "[pass] obstruction_k6" in out

    def test_json_report_carries_its_hash(self, capsys):
        assert main(["run", "quadratic_np", "--report", "json"]) == EXIT_PASS
        payload = json.loads(capsys.readouterr().out)
        assert payload["content_hash"] == content_hash(payload)
        assert payload["scenarios"][0]["scenario"] == "quadratic_np"
        assert "elapsed_ms" not in payload["scenarios"][0]

    def test_json_is_reproducible(self, capsys):
        main(["run", "counterexample", "--kmax", "3", "--report", "json", "--seed", "7"])
        first = capsys.readouterr().out
        main(["run", "counterexample", "--kmax", "3", "--report", "json", "--seed", "7"])
        assert capsys.readouterr().out == first

    def test_timing_adds_elapsed(self, capsys):
        assert main(["run", "counterexample", "--kmax", "1", "--report", "json", "--timing"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert "elapsed_ms" in payload["scenarios"][0]

    def test_unknown_scenario(self, capsys):
        assert main(["run", "nope"]) == EXIT_USAGE
        assert "unknown scenario 'nope'" in capsys.readouterr().err

    def test_invalid_parameter(self, capsys):
        assert main(["run", "counterexample", "--kmax", "0"]) == EXIT_USAGE
        assert "kmax" in capsys.readouterr().err

    def test_stray_path_after_scenario(self, capsys):
        assert main(["run", "counterexample", "extra.cnv"]) == EXIT_USAGE
        assert "unexpected argument" in capsys.readouterr().err

    def test_config_defaults_apply(self, tmp_path: Path, capsys):
        config_file = tmp_path / "novconf.yaml"
        config_file.write_text("novconf:\n  run:\n    kmax: 2\n    report_format: json\n")
        assert main(["run", "counterexample", "--config", str(config_file)]) == EXIT_PASS
        payload = json.loads(capsys.readouterr().out)
        assert payload["scenarios"][0]["parameters"]["kmax"] == 2

    def test_flags_override_config(self, tmp_path: Path, capsys):
        config_file = tmp_path / "novconf.yaml"
        config_file.write_text("novconf:\n  run:\n    kmax: 2\n")
        assert main(["run", "counterexample", "--config", str(config_file), "--kmax", "3"]) == 0
        assert "kmax=3" in capsys.readouterr().out

    def test_invalid_config(self, tmp_path: Path, capsys):
        config_file = tmp_path / "novconf.yaml"
        config_file.write_text("novconf:\n  run:\n    report_format: xml\n")
        assert main(["run", "counterexample", "--config", str(config_file)]) == EXIT_USAGE
        assert "report_format" in capsys.readouterr().err

    def test_missing_config(self, capsys):
        assert main(["run", "counterexample", "--config", "/nonexistent.yaml"]) == EXIT_USAGE
        assert "Config file not found" in capsys.readouterr().err


# ── run script ───────────────────────────────────────────────────


class TestRunScript:
    def test_passing_script(self, scripts_dir: Path, capsys):
        assert main(["run", "script", str(scripts_dir / "w.cnv")]) == EXIT_PASS
        out = capsys.readouterr().out
        assert "status=pass" in out

    def test_failing_script(self, scripts_dir: Path, capsys):
        assert main(["run", "script", str(scripts_dir / "failing.cnv")]) == EXIT_FAIL
        out = capsys.readouterr().out
        assert "status=fail" in out
        assert "[pass] jacobi" in out

    def test_parse_error_position(self, scripts_dir: Path, capsys):
        assert main(["run", "script", str(scripts_dir / "bad.cnv")]) == EXIT_USAGE
        assert "bad.cnv:2:22" in capsys.readouterr().err

    def test_missing_path(self, capsys):
        assert main(["run", "script"]) == EXIT_USAGE
        assert "needs a PATH" in capsys.readouterr().err

    def test_nonexistent_script(self, tmp_path: Path):
        assert main(["run", "script", str(tmp_path / "absent.cnv")]) == EXIT_USAGE

    def test_json_script_report(self, scripts_dir: Path, capsys):
        code = main(["run", "script", str(scripts_dir / "quadratic.cnv"), "--report", "json"])
        assert code == EXIT_PASS
        payload = json.loads(capsys.readouterr().out)
        assert payload["source"].endswith("quadratic.cnv")
        assert payload["content_hash"] == content_hash(payload)
