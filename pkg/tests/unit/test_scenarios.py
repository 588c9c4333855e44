"""Unit tests for the built-in scenario registry."""

import pytest

from novconf.errors import UsageError
from novconf.harness.embed_harness import WindowPolicy
from novconf.harness.scenarios import (
    ALIASES,
    SCENARIOS,
    ScenarioParams,
    list_scenarios,
    run_scenario,
    with_overrides,
)
from novconf.models.run_config import RunConfig

TIGHT = WindowPolicy(index_range=(-2, 2), s_max=0)


class TestRegistry:
    def test_names(self):
        assert list(SCENARIOS) == [
            "series00",
            "series_pq",
            "case1",
            "case2",
            "case3",
            "counterexample",
            "quadratic_np",
            "gelfand_demo",
            "coeff_locality",
            "generate_k",
        ]
        assert "embedding" in ALIASES

    def test_listing(self):
        lines = list_scenarios().splitlines()
        assert len(lines) == len(SCENARIOS)
        assert lines[0].startswith("series00 ")

    def test_unknown(self):
        with pytest.raises(UsageError, match="unknown scenario 'nope'"):
            run_scenario("nope")


class TestParams:
    def test_from_run_config(self):
        config = RunConfig(scenario="case2", M=2, seed=5, window=(-1, 1), s_max=1, degree=0)
        params = ScenarioParams.from_run_config(config)
        assert params.M == 2
        assert params.seed == 5
        assert params.policy.index_range == (-1, 1)
        assert params.policy.s_max == 1
        assert params.policy.degree == 0

    def test_with_overrides(self):
        params = with_overrides(ScenarioParams(), kmax=4, variant="f10")
        assert params.kmax == 4
        assert params.variant == "f10"
        assert ScenarioParams().kmax == 8


class TestRuns:
    def test_counterexample(self):
        (report,) = run_scenario("counterexample", ScenarioParams(kmax=2))
        assert report.passed
        assert report.parameters == {"kmax": 2}

    def test_case2_single_variant(self):
        reports = run_scenario("case2", ScenarioParams(variant="f01", policy=TIGHT))
        assert [r.scenario for r in reports] == ["case2"]
        assert reports[0].parameters["variant"] == "f01"

    def test_embedding_dispatch(self):
        reports = run_scenario("embedding", ScenarioParams(case="case2", variant="f10"))
        assert len(reports) == 1
        assert reports[0].passed

    def test_embedding_unknown_case(self):
        with pytest.raises(UsageError, match="--case"):
            run_scenario("embedding", ScenarioParams(case="case9"))

    def test_series_pq_explicit(self):
        (report,) = run_scenario("series_pq", ScenarioParams(p=1, q=0))
        assert report.parameters == {"M": 1, "p": 1, "q": 0}

    def test_quadratic_np(self):
        (report,) = run_scenario("quadratic_np", ScenarioParams(seed=3))
        assert report.passed
        assert report.seed == 3
        assert "coefficient_product" in {c.name for c in report.checks}

    def test_gelfand_demo(self):
        (report,) = run_scenario("gelfand_demo")
        assert report.passed
        naive = next(c for c in report.checks if c.name == "naive_derivation_rejected")
        assert naive.artifacts["leibniz_residuals"] == ["t,t: -2*t"]

    def test_generate_k(self):
        (report,) = run_scenario("generate_k", ScenarioParams(seed=1))
        assert report.passed
        assert len(report.checks) == 13

    @pytest.mark.slow
    def test_coeff_locality(self):
        (report,) = run_scenario("coeff_locality")
        assert report.passed

    def test_same_seed_same_report(self):
        first = run_scenario("generate_k", ScenarioParams(seed=9))[0]
        second = run_scenario("generate_k", ScenarioParams(seed=9))[0]
        assert first.model_dump(exclude={"elapsed_ms"}) == second.model_dump(exclude={"elapsed_ms"})
