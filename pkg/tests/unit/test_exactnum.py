"""Unit tests for exact binomials and the sparse linear solver."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from novconf.errors import UsageError
from novconf.tools.exactnum import LinearSystem, binomial, falling, gen_binomial, residual, solve


class TestBinomial:
    def test_values(self):
        assert binomial(5, 2) == 10
        assert binomial(6, 0) == 1
        assert binomial(6, 6) == 1

    def test_zero_outside_range(self):
        assert binomial(3, 5) == 0
        assert binomial(3, -1) == 0

    def test_negative_n_raises(self):
        with pytest.raises(UsageError, match="n >= 0"):
            binomial(-1, 0)

    @given(st.integers(min_value=1, max_value=40), st.integers(min_value=1, max_value=40))
    def test_pascal_rule(self, n, k):
        assert binomial(n, k) == binomial(n - 1, k) + binomial(n - 1, k - 1)


class TestFalling:
    def test_values(self):
        assert falling(5, 2) == 20
        assert falling(7, 0) == 1
        assert falling(-2, 3) == -24

    def test_vanishes_past_n(self):
        assert falling(3, 4) == 0

    def test_negative_j_raises(self):
        with pytest.raises(UsageError):
            falling(3, -1)


class TestGenBinomial:
    def test_agrees_with_binomial(self):
        for n in range(8):
            for s in range(8):
                assert gen_binomial(n, s) == binomial(n, s)

    def test_negative_upper_index(self):
        assert gen_binomial(-1, 3) == -1
        assert gen_binomial(-2, 2) == 3

    def test_negative_lower_index(self):
        assert gen_binomial(4, -1) == 0


class TestLinearSystem:
    def test_explicit_zero_rejected(self):
        with pytest.raises(UsageError, match="explicit zero"):
            LinearSystem(rows=[{0: Fraction(0)}], rhs=[Fraction(1)], n_cols=1)

    def test_column_out_of_range(self):
        with pytest.raises(UsageError, match="outside"):
            LinearSystem(rows=[{3: Fraction(1)}], rhs=[Fraction(1)], n_cols=2)

    def test_rhs_length_mismatch(self):
        with pytest.raises(UsageError):
            LinearSystem(rows=[{0: Fraction(1)}], rhs=[], n_cols=1)


class TestSolve:
    def test_unique_solution(self):
        system = LinearSystem(
            rows=[{0: Fraction(1), 1: Fraction(1)}, {0: Fraction(1), 1: Fraction(-1)}],
            rhs=[Fraction(3), Fraction(1)],
            n_cols=2,
        )
        assert solve(system) == [Fraction(2), Fraction(1)]

    def test_rational_solution(self):
        system = LinearSystem(rows=[{0: Fraction(3)}], rhs=[Fraction(1)], n_cols=1)
        assert solve(system) == [Fraction(1, 3)]

    def test_inconsistent_returns_none(self):
        system = LinearSystem(
            rows=[{0: Fraction(1)}, {0: Fraction(1)}],
            rhs=[Fraction(1), Fraction(2)],
            n_cols=1,
        )
        assert solve(system) is None

    def test_free_variables_are_zero(self):
        system = LinearSystem(
            rows=[{0: Fraction(1), 1: Fraction(1)}], rhs=[Fraction(1)], n_cols=2
        )
        solution = solve(system)
        assert solution is not None
        assert not any(residual(system, solution))
        assert Fraction(0) in solution

    def test_empty_system(self):
        assert solve(LinearSystem(rows=[], rhs=[], n_cols=2)) == [Fraction(0), Fraction(0)]

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.lists(st.integers(min_value=-3, max_value=3), min_size=4, max_size=4),
            min_size=1,
            max_size=6,
        ),
        st.lists(st.integers(min_value=-5, max_value=5), min_size=4, max_size=4),
    )
    def test_consistent_systems_are_solved(self, matrix, x0):
        rows = [{j: Fraction(v) for j, v in enumerate(row) if v} for row in matrix]
        rhs = [sum((Fraction(v) * x0[j] for j, v in enumerate(row)), Fraction(0)) for row in matrix]
        system = LinearSystem(rows=rows, rhs=rhs, n_cols=4)
        solution = solve(system)
        assert solution is not None
        assert not any(residual(system, solution))
