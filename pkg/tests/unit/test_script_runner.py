"""Unit tests for script evaluation."""

import pytest

from novconf.dsl.ast import Arg, IntValue, NameValue, Product, RangeValue, ScenarioCmd, Sum, Sym
from novconf.dsl.parser import parse_script
from novconf.errors import AxiomError, UsageError
from novconf.harness.scenarios import ScenarioParams
from novconf.harness.script_runner import (
    build_algebra,
    build_np_table,
    evaluate,
    run_script,
    run_script_file,
    scenario_params,
)
from novconf.models.report import CheckStatus
from novconf.tools.confalg import DEL, LAM, ConfElement
from novconf.tools.report_formatter import render_json

GENS = frozenset({"x", "y"})

CUR = """\
algebra Cur {
  generators: one, t;
  bracket(one, one) = one;
  bracket(one, t) = t;
  bracket(t, one) = t;
}
"""


def run(text: str, **params) -> object:
    return run_script(parse_script(text), ScenarioParams(**params))


def check(report, scenario: int, name: str):
    return next(c for c in report.scenarios[scenario].checks if c.name == name)


class TestEvaluate:
    def test_scalar(self):
        assert evaluate(Sum((Sym("del"), Sym("lam"))), GENS) == DEL + LAM

    def test_element(self):
        value = evaluate(Product((Sum((Sym("del"), Sym("lam"))), Sym("x"))), GENS)
        assert value == ConfElement.gen("x", DEL + LAM)

    def test_errors(self):
        with pytest.raises(UsageError, match="unknown generator"):
            evaluate(Sym("z"), GENS)
        with pytest.raises(UsageError, match="combination of generators"):
            evaluate(Sum((Sym("x"), Sym("lam"))), GENS)
        with pytest.raises(UsageError, match="at most one generator"):
            evaluate(Product((Sym("x"), Sym("y"))), GENS)

    def test_power_of_element(self):
        script = parse_script("algebra A { generators: x; bracket(x, x) = x^2; }")
        with pytest.raises(UsageError, match="only scalars"):
            build_algebra(script.items[0])


class TestDeclarations:
    def test_duplicate_bracket(self):
        script = parse_script("algebra A { generators: x; bracket(x, x) = x; bracket(x, x) = 2*x; }")
        with pytest.raises(UsageError, match="declared twice"):
            build_algebra(script.items[0])

    def test_np_constants(self):
        script = parse_script("npalgebra P { basis: e; circ(e, e) = e + e; star(e, e) = 1/2*e; }")
        table = build_np_table(script.items[0])
        assert table.circ[("e", "e")] == {"e": 2}
        assert str(table.star[("e", "e")]["e"]) == "1/2"

    def test_np_constant_expression(self):
        script = parse_script("npalgebra P { basis: e; circ(e, e) = (1 + 1)^2*e; }")
        assert build_np_table(script.items[0]).circ[("e", "e")] == {"e": 4}


class TestScripts:
    def test_w(self, scripts_dir):
        report = run_script_file(scripts_dir / "w.cnv", ScenarioParams())
        assert report.passed
        assert report.source == f"script:{scripts_dir / 'w.cnv'}"
        assert [s.scenario for s in report.scenarios] == [
            "check rsym_novikov W",
            "check lcom_novikov W",
            "locality W v2 x",
            "product W v1(2) x(1)",
        ]
        loc = check(report, 2, "locality")
        assert loc.artifacts == {"bracket": "(del^2 + 2*del*lam + lam^2)*v2", "locality": "3"}
        assert check(report, 3, "coefficient_product").artifacts["product"] == "v1(2) * x(1) = -v1(2)"

    def test_quadratic(self, scripts_dir):
        report = run_script_file(scripts_dir / "quadratic.cnv", ScenarioParams())
        assert report.passed
        product = check(report, 3, "coefficient_product")
        assert product.artifacts["product"] == "e(2) * e(-1) = 2*e(0) + e(1)"
        assert check(report, 4, "locality").artifacts["locality"] == "2"

    def test_gelfand(self, scripts_dir):
        report = run_script_file(scripts_dir / "gelfand.cnv", ScenarioParams())
        assert report.passed
        assert check(report, -1, "locality").artifacts["bracket"] == "(-lam + 1)*t"

    def test_naive_derivation(self):
        text = CUR + "derivation N on Cur { N(t) = one; }\ncheck derivation N;\n"
        report = run(text)
        assert not report.passed
        failure = check(report, 0, "derivation")
        assert failure.artifacts["failures"] == ["t,t: -2*t"]

    def test_naive_derivation_rejected_for_identities(self):
        text = CUR + "derivation N on Cur { N(t) = one; }\ncheck rsym_novikov N;\n"
        with pytest.raises(AxiomError, match="derivation"):
            run(text)

    def test_failing_identity(self, scripts_dir):
        report = run_script_file(scripts_dir / "failing.cnv", ScenarioParams())
        assert report.status == CheckStatus.FAIL
        assert check(report, 0, "jacobi_on_generators").passed
        lcom = check(report, 1, "lcom_novikov_on_generators")
        assert not lcom.passed
        assert lcom.artifacts["failures"][0].startswith("L,L,L: ")

    def test_np_axioms_failure(self):
        text = "npalgebra Q { basis: e, f; star(e, f) = e; }\ncheck np_axioms Q;\n"
        report = run(text)
        assert not report.passed
        assert any(
            line.startswith("star_commutative e,f")
            for line in check(report, 0, "np_axioms").artifacts["failures"]
        )

    def test_samples_follow_seed(self, w_script):
        first = render_json(run(w_script, seed=4))
        assert first == render_json(run(w_script, seed=4))


class TestMembershipCommand:
    def test_fixture(self, scripts_dir):
        report = run_script_file(scripts_dir / "membership.cnv", ScenarioParams())
        assert report.passed
        first = report.scenarios[0]
        assert first.parameters["locality"] == "default=1"
        assert first.windows[0].max_multiplier_degree == 0
        assert (first.windows[0].index_lo, first.windows[0].index_hi) == (-2, 2)

    def test_multiplier_and_derivative(self):
        text = "membership target=f(x, y, 0, 0, 1) multiplier=var(x, 0, 0) window=-1:1 smax=1 deriv=1;"
        report = run(text)
        assert report.passed
        assert report.scenarios[0].parameters["letters"] == ["x", "y"]

    def test_stray_letters(self):
        text = "localityfn N1 { letters: x, y; default: 1; }\nmembership locality=N1 target=f(a, y, 0, 0, 1);"
        with pytest.raises(UsageError, match="outside N1"):
            run(text)

    def test_missing_target(self):
        with pytest.raises(UsageError, match="needs a target"):
            run("membership degree=0;")

    def test_unknown_key(self):
        with pytest.raises(UsageError, match="does not accept"):
            run("membership target=f(x, y, 0, 0, 1) colour=1;")

    def test_malformed_target(self):
        with pytest.raises(UsageError, match="must look like"):
            run("membership target=f(x, y, 0);")


class TestScenarioCommand:
    def test_runs_registry_scenario(self):
        report = run("scenario counterexample kmax=2;")
        (scenario,) = report.scenarios
        assert scenario.scenario == "counterexample"
        assert scenario.parameters == {"kmax": 2}

    def test_params(self):
        cmd = ScenarioCmd(
            "case2",
            (
                Arg("window", RangeValue(-2, 2)),
                Arg("variant", NameValue("f01")),
                Arg("M", IntValue(2)),
                Arg("smax", IntValue(0)),
            ),
        )
        params = scenario_params(ScenarioParams(seed=3), cmd)
        assert params.policy.index_range == (-2, 2)
        assert params.policy.s_max == 0
        assert params.variant == "f01"
        assert params.M == 2
        assert params.seed == 3

    @pytest.mark.parametrize(
        ("text", "match"),
        [
            ("scenario counterexample seed=-1;", "seed must be >= 0"),
            ("scenario counterexample colour=1;", "does not accept"),
            ("scenario counterexample kmax=2 kmax=3;", "given 2 times"),
            ("scenario case2 variant=3;", "must be a name"),
            ("scenario case2 window=2:1;", "lo must not exceed hi"),
            ("scenario nope;", "unknown scenario"),
        ],
    )
    def test_bad_arguments(self, text, match):
        with pytest.raises(UsageError, match=match):
            run(text)
