"""Unit tests for conformal presentations, identities, derivations and NP algebras."""

from fractions import Fraction

import pytest

from novconf.errors import AxiomError, ClosureError, UsageError
from novconf.tools.confalg import (
    DEL,
    LAM,
    MU,
    NU,
    ConfElement,
    ConfPresentation,
    DerivationTable,
    Identity,
    NovikovPoissonTable,
    bracket,
    build_w,
    check_derivation,
    check_identity,
    check_np_axioms,
    check_on_generators,
    check_on_samples,
    euler_plus_partial,
    gelfand,
    locality,
    n_product,
    one_dim_np,
    quadratic_from_np,
    render_oppoly,
    subst_neg_partial,
    table_locality,
    w_generator,
)

x = ConfElement.gen("x")


def virasoro() -> ConfPresentation:
    return ConfPresentation(
        name="Vir",
        generators=("L",),
        table={("L", "L"): ConfElement.gen("L", DEL + 2 * LAM)},
    )


class TestPresentation:
    def test_unknown_generator_in_table(self):
        with pytest.raises(UsageError, match="unknown generator"):
            ConfPresentation(name="A", generators=("a",), table={("a", "b"): ConfElement.gen("a")})

    def test_duplicate_generators(self):
        with pytest.raises(UsageError, match="duplicate"):
            ConfPresentation(name="A", generators=("a", "a"), table={})

    def test_foreign_symbols_rejected(self):
        with pytest.raises(UsageError, match="symbols"):
            ConfPresentation(
                name="A", generators=("a",), table={("a", "a"): ConfElement.gen("a", MU)}
            )

    def test_unlisted_pairs_are_zero(self, w_algebra):
        assert w_algebra.entry("x", "v1").is_zero


class TestBracket:
    def test_table_entry(self, w_algebra):
        v2 = ConfElement.gen("v2")
        assert bracket(w_algebra, v2, x) == ConfElement.gen("v2", (DEL + LAM) ** 2)

    def test_left_sesquilinearity(self, w_algebra):
        v1 = ConfElement.gen("v1")
        assert bracket(w_algebra, v1.partial(), x) == bracket(w_algebra, v1, x) * (-LAM)

    def test_right_sesquilinearity(self, w_algebra):
        v1 = ConfElement.gen("v1")
        assert bracket(w_algebra, v1, x.partial()) == bracket(w_algebra, v1, x) * (DEL + LAM)

    def test_output_variable(self, w_algebra):
        v1 = ConfElement.gen("v1")
        assert bracket(w_algebra, v1, x, MU) == ConfElement.gen("v1", DEL + MU)

    def test_output_variable_with_del(self, w_algebra):
        with pytest.raises(UsageError, match="del"):
            bracket(w_algebra, x, x, DEL)

    def test_unknown_generator(self, w_algebra):
        with pytest.raises(UsageError, match="unknown generator"):
            bracket(w_algebra, ConfElement.gen("q"), x)


class TestNProductAndLocality:
    def test_n_products_of_w(self, w_algebra):
        v2 = ConfElement.gen("v2")
        assert n_product(w_algebra, v2, x, 0) == ConfElement.gen("v2", DEL**2)
        assert n_product(w_algebra, v2, x, 1) == ConfElement.gen("v2", 2 * DEL)
        assert n_product(w_algebra, v2, x, 2) == ConfElement.gen("v2", 2)
        assert n_product(w_algebra, v2, x, 3).is_zero

    def test_negative_n(self, w_algebra):
        with pytest.raises(UsageError):
            n_product(w_algebra, x, x, -1)

    def test_locality(self, w_algebra):
        assert table_locality(w_algebra, "v3", "x") == 4
        assert table_locality(w_algebra, "x", "v3") == 0

    def test_obstruction_locality(self, w_algebra):
        for k in range(4):
            vk = ConfElement.gen(w_generator(k))
            assert locality(w_algebra, vk.partial(k), x) == 2 * k + 1

    def test_subst_neg_partial(self):
        e = ConfElement.gen("a", NU**2)
        assert subst_neg_partial(e, LAM) == ConfElement.gen("a", (DEL + LAM) ** 2)

    def test_render(self):
        assert render_oppoly((DEL + LAM) ** 2) == "del^2 + 2*del*lam + lam^2"
        assert render_oppoly(LAM * 0) == "0"


class TestIdentities:
    @pytest.mark.parametrize("which", [Identity.RSYM_NOVIKOV, Identity.LCOM_NOVIKOV])
    def test_w_is_novikov(self, w_algebra, which):
        assert check_on_generators(w_algebra, which) == []

    def test_quadratic_is_novikov(self, quadratic, rng):
        for which in (Identity.RSYM_NOVIKOV, Identity.LCOM_NOVIKOV):
            assert check_on_generators(quadratic, which) == []
            assert check_on_samples(quadratic, which, rng, 10) == []

    def test_virasoro_is_lie_not_novikov(self):
        vir = virasoro()
        assert check_on_generators(vir, Identity.JACOBI) == []
        assert check_on_generators(vir, Identity.ANTICOMMUTATIVE) == []
        failures = check_on_generators(vir, Identity.LCOM_NOVIKOV)
        assert len(failures) == 1
        assert failures[0].arguments == ("L", "L", "L")
        assert not failures[0].residual.is_zero

    def test_current_is_commutative_associative(self, current):
        assert check_on_generators(current, Identity.COMMUTATIVE) == []
        assert check_on_generators(current, Identity.ASSOCIATIVE) == []

    def test_ternary_needs_three_arguments(self, w_algebra):
        with pytest.raises(UsageError, match="three arguments"):
            check_identity(w_algebra, Identity.JACOBI, x, x)

    def test_unknown_identity_name(self, w_algebra):
        with pytest.raises(ValueError):
            check_on_generators(w_algebra, "distributive")


class TestDerivations:
    def test_partial_is_derivation(self, w_algebra):
        assert check_derivation(w_algebra, DerivationTable.partial(w_algebra)).holds

    def test_naive_derivation_fails(self, current):
        naive = DerivationTable(name="naive", images={"t": ConfElement.gen("one")})
        report = check_derivation(current, naive)
        assert not report.holds
        (failure,) = report.failures
        assert failure.arguments == ("t", "t")
        assert failure.residual == ConfElement.gen("t", -2)

    def test_gelfand_rejects_naive(self, current):
        naive = DerivationTable(name="naive", images={"t": ConfElement.gen("one")})
        with pytest.raises(AxiomError) as err:
            gelfand(current, naive)
        assert err.value.axiom == "derivation"

    def test_gelfand_requires_commutative(self, w_algebra):
        with pytest.raises(AxiomError, match="commutative"):
            gelfand(w_algebra, DerivationTable.partial(w_algebra))

    def test_gelfand_closure(self, current):
        stray = DerivationTable(name="stray", images={"t": ConfElement.gen("s")})
        with pytest.raises(ClosureError):
            gelfand(current, stray)

    def test_gelfand_table_is_novikov(self, current):
        d = euler_plus_partial(current, {"one": 0, "t": 1})
        assert check_derivation(current, d).holds
        induced = gelfand(current, d)
        assert induced.entry("t", "one") == ConfElement.gen("t", 1 - LAM)
        assert induced.entry("one", "one") == ConfElement.gen("one", -LAM)
        for which in (Identity.RSYM_NOVIKOV, Identity.LCOM_NOVIKOV):
            assert check_on_generators(induced, which) == []


class TestNovikovPoisson:
    def test_one_dim_axioms(self):
        assert check_np_axioms(one_dim_np()).holds

    def test_quadratic_bracket(self, quadratic):
        assert quadratic.entry("e", "e") == ConfElement.gen("e", 1 + LAM)

    def test_failed_axiom(self):
        table = NovikovPoissonTable(
            name="bad",
            basis=("e", "f"),
            circ={},
            star={("e", "f"): {"e": Fraction(1)}},
        )
        report = check_np_axioms(table)
        assert not report.holds
        assert "star_commutative" in {f.axiom for f in report.failures}
        with pytest.raises(AxiomError):
            quadratic_from_np(table)

    def test_non_basis_reference(self):
        with pytest.raises(UsageError, match="non-basis"):
            NovikovPoissonTable(name="bad", basis=("e",), circ={("e", "e"): {"f": Fraction(1)}}, star={})

    def test_w_kmax_validation(self):
        with pytest.raises(UsageError):
            build_w(-1)
