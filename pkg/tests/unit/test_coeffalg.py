"""Unit tests for the coefficient algebra."""

from fractions import Fraction

import pytest

from novconf.errors import UsageError
from novconf.tools.confalg import DEL, LAM, ConfElement, DerivationTable, euler_plus_partial
from novconf.tools.coeffalg import (
    CoeffElement,
    CoeffIdentity,
    check_coeff_identities,
    check_locality_relations,
    check_residue_formula,
    induced_derivation,
    inject,
    locality_relation,
    product,
    product_locality,
    sample_coefficients,
)


def e(n: int, c: int = 1) -> CoeffElement:
    return CoeffElement.symbol("e", n, c)


class TestCoeffElement:
    def test_zero_coefficients_dropped(self):
        assert (e(1) - e(1)).is_zero
        assert len(e(1) + e(2) * 0) == 1

    def test_render(self):
        assert (e(2) - e(-1, 3)).render() == "-3*e(-1) + e(2)"
        assert CoeffElement().render() == "0"


class TestInject:
    def test_partial_eliminated(self, quadratic):
        u = ConfElement.gen("e", DEL**2)
        assert inject(quadratic, u, 3) == e(1, 6)

    def test_single_partial_sign(self, quadratic):
        assert inject(quadratic, ConfElement.gen("e").partial(), 4) == e(3, -4)

    def test_lambda_rejected(self, quadratic):
        with pytest.raises(UsageError, match="cannot inject"):
            inject(quadratic, ConfElement.gen("e", LAM), 0)


class TestProduct:
    @pytest.mark.parametrize(("n", "m"), [(0, 0), (2, -1), (-3, 4), (5, 5)])
    def test_quadratic_formula(self, quadratic, n, m):
        assert product(quadratic, e(n), e(m)) == e(n + m) + e(n + m - 1, n)

    def test_bilinear(self, quadratic):
        lhs = product(quadratic, e(1) + e(2, 3), e(0))
        rhs = product(quadratic, e(1), e(0)) + product(quadratic, e(2), e(0)) * 3
        assert lhs == rhs

    def test_w_product(self, w_algebra):
        # (v1 ₀ x) = ∂v1, (v1 ₁ x) = v1
        v1 = CoeffElement.symbol("v1", 2)
        x = CoeffElement.symbol("x", 1)
        assert product(w_algebra, v1, x) == CoeffElement.symbol("v1", 2, -1)

    def test_zero_pair(self, w_algebra):
        x = CoeffElement.symbol("x", 0)
        assert product(w_algebra, x, CoeffElement.symbol("v2", 0)).is_zero


class TestLocalityRelations:
    def test_quadratic_holds_at_two(self, quadratic):
        report = check_locality_relations(quadratic, "e", "e", 2, range(-2, 3))
        assert report.holds
        assert report.checked == 25

    def test_quadratic_fails_at_one(self, quadratic):
        report = check_locality_relations(quadratic, "e", "e", 1, range(-1, 2))
        assert not report.holds
        first = report.witnesses[0]
        assert first.value == e(first.n + first.m - 1)

    def test_relation_value(self, quadratic):
        assert locality_relation(quadratic, "e", "e", 1, 3, 0) == e(2)

    def test_w_locality(self, w_algebra):
        assert check_locality_relations(w_algebra, "v3", "x", 4, range(-2, 3)).holds
        assert not check_locality_relations(w_algebra, "v3", "x", 3, range(-2, 3)).holds

    def test_unknown_generator(self, quadratic):
        with pytest.raises(UsageError):
            check_locality_relations(quadratic, "e", "f", 2, range(1))


class TestCoeffIdentities:
    def test_current_is_commutative_associative(self, current, rng):
        pool = sample_coefficients(current, rng, 15)
        triples = [tuple(pool[i : i + 3]) for i in range(0, 15, 3)]
        assert check_coeff_identities(current, CoeffIdentity.COMMUTATIVE, triples).holds
        assert check_coeff_identities(current, "associative", triples).holds

    def test_quadratic_is_novikov(self, quadratic, rng):
        pool = sample_coefficients(quadratic, rng, 12)
        triples = [tuple(pool[i : i + 3]) for i in range(0, 12, 3)]
        report = check_coeff_identities(quadratic, CoeffIdentity.NOVIKOV, triples)
        assert report.holds
        assert report.samples == 4

    def test_quadratic_is_not_commutative(self, quadratic):
        report = check_coeff_identities(quadratic, "commutative", [(e(2), e(0), e(0))])
        (failure,) = report.failures
        assert failure.residual == e(1, 2)

    def test_unknown_identity(self, quadratic):
        with pytest.raises(ValueError):
            check_coeff_identities(quadratic, "alternative", [])


class TestResidueAndDerivations:
    @pytest.mark.parametrize(("n", "m"), [(0, 0), (1, 3), (1, -2), (2, 1)])
    def test_residue_formula_quadratic(self, quadratic, n, m):
        assert check_residue_formula(quadratic, "e", "e", n, m).is_zero

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_residue_formula_w(self, w_algebra, n):
        assert check_residue_formula(w_algebra, "v2", "x", n, 1).is_zero

    def test_residue_formula_negative_n(self, quadratic):
        with pytest.raises(UsageError, match="n >= 0"):
            check_residue_formula(quadratic, "e", "e", -1, 0)

    def test_induced_partial(self, quadratic):
        d = DerivationTable.partial(quadratic)
        assert induced_derivation(quadratic, d, e(3)) == e(2, -3)

    def test_induced_euler(self, current):
        d = euler_plus_partial(current, {"one": 0, "t": 1})
        t4 = CoeffElement.symbol("t", 4)
        expected = CoeffElement.symbol("t", 3, -4) + t4
        assert induced_derivation(current, d, t4) == expected
        assert induced_derivation(current, d, t4 * Fraction(1, 2)) == expected * Fraction(1, 2)

    def test_product_locality_on_w(self, w_algebra):
        for k in range(4):
            expected = {n: 2 * k - n + 1 for n in range(k + 1)}
            assert product_locality(w_algebra, f"v{k}", "x", "x") == expected
