"""End-to-end acceptance checks: each exact identity the kernel is expected to reproduce."""

from __future__ import annotations

import itertools
import random
from pathlib import Path

import pytest

from novconf.dsl.parser import parse_script
from novconf.dsl.printer import render_script
from novconf.harness.embed_harness import (
    run_case1,
    run_case2,
    run_case3,
    run_counterexample,
    run_series00,
    run_series_pq,
)
from novconf.harness.scenarios import CASE3_TRIPLES, run_scenario
from novconf.tools import distribution as dist
from novconf.tools.confalg import (
    DEL,
    LAM,
    ConfElement,
    Identity,
    bracket,
    build_w,
    check_on_generators,
    locality,
    n_product,
)
from novconf.tools.diffpoly import (
    check_novikov_axioms,
    novikov_product,
    sample_homogeneous,
    var,
)
from novconf.tools.distribution import binom_power, binom_split, coefficient, series
from novconf.tools.idealkit import emit_fpq, leibniz_fpq, pascal_reduce

KMAX = 8


def check_named(report, name):
    (check,) = [c for c in report.checks if c.name == name]
    return check


# ── The algebra W ──────────────────────────────────────────────────


class TestCounterexample:
    def test_identities_vanish_on_all_generator_triples(self):
        algebra = build_w(KMAX)
        assert check_on_generators(algebra, Identity.RSYM_NOVIKOV) == []
        assert check_on_generators(algebra, Identity.LCOM_NOVIKOV) == []

    def test_intermediate_values(self):
        report = run_counterexample(KMAX)
        assert report.passed
        for k in range(KMAX + 1):
            check = check_named(report, f"rsym_terms_k{k}")
            assert check.passed
            assert check.artifacts["left"] == check.artifacts["right"]

    def test_obstruction(self):
        report = run_counterexample(KMAX)
        for k in range(KMAX + 1):
            check = check_named(report, f"obstruction_k{k}")
            assert check.passed
            assert check.parameters["locality"] == 2 * k + 1
        assert check_named(report, "locality_sequence").parameters["localities"] == [
            2 * k + 1 for k in range(KMAX + 1)
        ]

    @pytest.mark.parametrize("k", range(4))
    def test_obstruction_bracket(self, k):
        algebra = build_w(3)
        vk, x = algebra.element(f"v{k}"), algebra.element("x")
        zeroth = n_product(algebra, vk, x, 0)
        expected = ConfElement.gen(f"v{k}", (-LAM) ** k * (DEL + LAM) ** k)
        assert bracket(algebra, zeroth, x) == expected
        assert locality(algebra, zeroth, x) == 2 * k + 1


# ── Free Novikov algebra of differential polynomials ───────────────


class TestFreeNovikov:
    def test_sampled_triples(self):
        rng = random.Random(0)
        gens = ("x", "y", "z")
        for _ in range(200):
            f, g, h = (
                sample_homogeneous(rng, gens, -1, max_degree=4, index_range=(-2, 2))
                for _ in range(3)
            )
            assert check_novikov_axioms(f, g, h).holds

    def test_associator_rewrite(self):
        x, y, z = var("x"), var("y"), var("z")
        associator = novikov_product(novikov_product(x, y), z) - novikov_product(
            x, novikov_product(y, z)
        )
        assert associator == var("x", 2) * y * z


# ── Series identities ────────────────────────────────────────────


class TestSeries:
    @pytest.mark.parametrize(("a", "b"), list(itertools.product(range(5), repeat=2)))
    def test_binom_split(self, a, b):
        p, q = binom_split("w", "z", "zeta", a, b)
        assert binom_power("w", "zeta", a) * p + binom_power("zeta", "z", b) * q == binom_power(
            "w", "z", a + b
        )

    @pytest.mark.slow
    @pytest.mark.parametrize("M", [1, 2, 3])
    def test_series00(self, M):  # noqa: N803
        assert run_series00(M).passed

    @pytest.mark.slow
    @pytest.mark.parametrize("M", [1, 2, 3])
    @pytest.mark.parametrize(
        ("p", "q"), [(p, q) for p, q in itertools.product(range(4), repeat=2) if 1 <= p + q <= 3]
    )
    def test_series_pq(self, M, p, q):  # noqa: N803
        report = run_series_pq(M, p, q)
        assert report.passed
        if q == 0:
            assert check_named(report, "series_p0_rewrite").passed
        elif p == 0:
            assert check_named(report, "series_0q_rewrite").passed


# ── Embedding certificates at M = 1 ────────────────────────────────


def assert_certified(report, name):
    check = check_named(report, name)
    assert check.passed, check.artifacts.get("diagnostics")
    assert check.artifacts["certificate"]
    assert check.parameters["summands"] >= 1


@pytest.mark.slow
class TestEmbeddingCertificates:
    def test_case1_r2(self):
        assert_certified(run_case1(1, r=2), "case1_membership")

    def test_case1_r3(self):
        assert_certified(run_case1(1, n=1, m=-1, r=3), "case1_membership")

    def test_case2_f10_is_a_generator(self):
        report = run_case2(1, "f10")
        assert check_named(report, "f10_equals_f").passed

    @pytest.mark.parametrize("variant", ["f01", "df00"])
    def test_case2(self, variant):
        report = run_case2(1, variant)
        assert report.passed
        assert_certified(report, f"{variant}_membership")

    @pytest.mark.parametrize(("p", "q", "l"), CASE3_TRIPLES)
    def test_case3(self, p, q, l):  # noqa: E741
        report = run_case3(1, p, q, l)
        assert check_named(report, "case3_weight").passed
        assert_certified(report, "case3_membership")


# ── Pascal and Leibniz families ──────────────────────────────────


class TestFamilies:
    def test_pascal(self):
        for exponent in range(1, 7):
            for n, m in itertools.product(range(-3, 4), repeat=2):
                assert pascal_reduce("a", "b", n, m, exponent).holds

    def test_leibniz(self):
        for p, q in itertools.product(range(4), repeat=2):
            if p + q > 3:
                continue
            for exponent in range(7):
                assert leibniz_fpq("a", "b", p, q, 0, 0, exponent).holds
                assert leibniz_fpq("a", "b", p, q, 2, -1, exponent).holds


# ── Coefficient algebras and the Gelfand construction ──────────────


class TestAlgebraScenarios:
    def test_quadratic_np(self):
        (report,) = run_scenario("quadratic_np")
        assert report.passed
        for name in ("np_axioms", "coefficient_product", "locality_relation", "coefficient_novikov"):
            assert check_named(report, name).passed

    def test_coeff_locality(self):
        (report,) = run_scenario("coeff_locality")
        assert report.passed
        assert check_named(report, "w_coefficient_products").passed

    def test_gelfand_demo(self):
        (report,) = run_scenario("gelfand_demo")
        assert report.passed
        for which in (Identity.RSYM_NOVIKOV, Identity.LCOM_NOVIKOV):
            assert check_named(report, f"{which}_on_generators").passed
            samples = check_named(report, f"{which}_on_samples")
            assert samples.passed
            assert samples.parameters["samples"] == 50


# ── Families against formal distributions ──────────────────────────


class TestDistributionOracle:
    @pytest.mark.parametrize(("p", "q"), list(itertools.product(range(3), repeat=2)))
    def test_emit_fpq_is_a_distribution_coefficient(self, p, q):
        product = dist.mul(series("x", p, "w"), series("y", q, "z"))
        for exponent in range(5):
            d = product * binom_power("w", "z", exponent)
            for n, m in itertools.product(range(-2, 3), repeat=2):
                got = coefficient(d, {"w": n - exponent, "z": m})
                assert got == emit_fpq("x", "y", p, q, n, m, exponent)


# ── Script round trip ────────────────────────────────────────────


class TestScriptFiles:
    @pytest.mark.parametrize("name", ["w.cnv", "quadratic.cnv", "gelfand.cnv", "membership.cnv"])
    def test_fixture_round_trip(self, scripts_dir: Path, name):
        script = parse_script((scripts_dir / name).read_text(encoding="utf-8"))
        printed = render_script(script)
        assert parse_script(printed) == script
        assert render_script(parse_script(printed)) == printed
