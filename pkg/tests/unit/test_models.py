"""Unit tests for windows, run configurations and reports."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from novconf.models.report import CheckResult, CheckStatus, RunReport, ScenarioReport
from novconf.models.run_config import ReportFormat, RunConfig
from novconf.models.window import Window


class TestWindow:
    def test_indices_and_label(self):
        w = Window(index_lo=-2, index_hi=1, s_max=1, max_multiplier_degree=0)
        assert list(w.indices) == [-2, -1, 0, 1]
        assert w.span == 4
        assert w.label() == "[-2,1] s_max=1 max_p=1 degree<=0"

    def test_inverted_range(self):
        with pytest.raises(ValueError, match="must not exceed"):
            Window(index_lo=1, index_hi=0)

    def test_negative_bounds(self):
        with pytest.raises(ValidationError):
            Window(index_lo=0, index_hi=1, s_max=-1)

    def test_frozen(self):
        w = Window(index_lo=0, index_hi=1)
        with pytest.raises(ValidationError):
            w.index_lo = -1

    def test_covers(self):
        big = Window(index_lo=-3, index_hi=3, s_max=2, max_multiplier_degree=2)
        small = Window(index_lo=-1, index_hi=1, s_max=0, max_multiplier_degree=0)
        assert big.covers(small)
        assert not small.covers(big)
        assert big.covers(big)


class TestRunConfig:
    def test_exactly_one_source(self):
        with pytest.raises(ValueError, match="exactly one input source"):
            RunConfig()
        with pytest.raises(ValueError, match="exactly one input source"):
            RunConfig(scenario="case1", script=Path("a.cnv"))

    def test_source(self):
        assert RunConfig(scenario="case2").source == "scenario:case2"
        assert RunConfig(script=Path("w.cnv")).source == "script:w.cnv"

    def test_defaults(self):
        cfg = RunConfig(scenario="counterexample")
        assert cfg.report_format == ReportFormat.TEXT
        assert cfg.kmax == 8
        assert cfg.window is None

    def test_window_order(self):
        with pytest.raises(ValueError, match="window lo"):
            RunConfig(scenario="case2", window=(3, -3))

    def test_negative_seed(self):
        with pytest.raises(ValidationError):
            RunConfig(scenario="case2", seed=-1)


class TestReports:
    def test_check_of(self):
        ok = CheckResult.of("x", True, parameters={"k": 1})
        assert ok.status == CheckStatus.PASS
        assert ok.passed
        assert not CheckResult.of("y", False).passed

    def test_empty_name(self):
        with pytest.raises(ValidationError):
            CheckResult.of("", True)

    def test_scenario_status(self):
        report = ScenarioReport(
            scenario="s",
            checks=[CheckResult.of("a", True), CheckResult.of("b", False)],
        )
        assert report.status == CheckStatus.FAIL
        assert [c.name for c in report.failed_checks()] == ["b"]
        assert ScenarioReport(scenario="empty").passed

    def test_run_status(self):
        good = ScenarioReport(scenario="g", checks=[CheckResult.of("a", True)])
        bad = ScenarioReport(scenario="b", checks=[CheckResult.of("a", False)])
        assert RunReport(source="scenario:g", scenarios=[good]).passed
        run = RunReport(source="script:x", scenarios=[good, bad])
        assert run.status == CheckStatus.FAIL
        assert run.check_count == 2

    def test_status_is_serialized(self):
        report = ScenarioReport(scenario="g", checks=[CheckResult.of("a", True)])
        assert report.model_dump(mode="json")["status"] == "pass"
