"""Tests for coeff module."""

from fractions import Fraction

import pytest

from src.coeff import (
    HbarSeries,
    LaurentQ,
    RatQ,
    hbar_substitute,
    lambda_ring,
    laurent_normalize,
    ratfunc_reduce,
)


class TestLaurentQ:
    """Tests for Laurent polynomial arithmetic."""

    def test_unit_cancellation(self):
        """Test q * q^-1 collapses to 1."""
        assert LaurentQ.q() * LaurentQ.monomial(-1) == LaurentQ.one()

    def test_zero_annihilates(self):
        """Test multiplying by zero gives the zero polynomial."""
        assert (LaurentQ.zero() * LaurentQ.q_minus_q_inv()).is_zero()

    def test_difference_of_squares(self):
        """Test (q - q^-1)(q + q^-1) = q^2 - q^-2."""
        plus = LaurentQ({1: 1, -1: 1})
        assert LaurentQ.q_minus_q_inv() * plus == LaurentQ({2: 1, -2: -1})

    def test_normalize_collects_terms(self):
        """Test raw term lists are collected and zeros dropped."""
        p = laurent_normalize([(1, 2), (1, -2), (0, 3), (-1, 1)])
        assert p.terms == {-1: Fraction(1), 0: Fraction(3)}

    def test_render(self):
        """Test rendering in descending exponent order."""
        assert str(LaurentQ({2: 1, -2: -1})) == "q^2 - q^-2"
        assert str(LaurentQ({1: Fraction(1, 2), 0: -3})) == "1/2*q - 3"
        assert str(LaurentQ.zero()) == "0"

    def test_parse(self):
        """Test parsing of the textual coefficient grammar."""
        assert LaurentQ.parse("q^2 - q^-2") == LaurentQ({2: 1, -2: -1})
        assert LaurentQ.parse("1/2*q - 3") == LaurentQ({1: Fraction(1, 2), 0: -3})

    def test_parse_rejects_non_laurent(self):
        """Test a genuine rational function is not a Laurent polynomial."""
        with pytest.raises(ValueError):
            LaurentQ.parse("1/(q - 1)")

    def test_parse_rejects_foreign_symbols(self):
        """Test unknown symbols are rejected."""
        with pytest.raises(ValueError):
            LaurentQ.parse("q + x")

    def test_evaluate(self):
        """Test evaluation at a rational point."""
        assert LaurentQ.q_minus_q_inv().evaluate(2) == Fraction(3, 2)
        assert LaurentQ.q_minus_q_inv().evaluate(1) == 0

    def test_negative_power_of_monomial(self):
        """Test monomials invert inside the Laurent ring."""
        assert LaurentQ.monomial(2, 3) ** -1 == LaurentQ.monomial(-2, Fraction(1, 3))
        with pytest.raises(ValueError):
            LaurentQ.q_minus_q_inv() ** -1

    def test_equality_with_scalars(self):
        """Test constants compare equal to ints and fractions."""
        assert LaurentQ.constant(Fraction(1, 2)) == Fraction(1, 2)
        assert LaurentQ.one() == 1


class TestRatQ:
    """Tests for reduced rational functions."""

    def test_reduces_common_factor(self):
        """Test (q^2 - 1)/(q - 1) reduces to q + 1."""
        num = LaurentQ({2: 1, 0: -1})
        den = LaurentQ({1: 1, 0: -1})
        assert ratfunc_reduce(num, den) == RatQ(LaurentQ({1: 1, 0: 1}))
        assert ratfunc_reduce(num, den).is_laurent()

    def test_identity_denominator(self):
        """Test p/1 is p."""
        p = LaurentQ.q_minus_q_inv()
        assert RatQ(p, 1).as_laurent() == p

    def test_self_quotient(self):
        """Test (q - q^-1)/(q - q^-1) = 1."""
        p = LaurentQ.q_minus_q_inv()
        assert RatQ(p, p) == RatQ.one()

    def test_parse(self):
        """Test parsing a quotient."""
        assert RatQ.parse("(q^2 - 1)/(q - 1)") == RatQ(LaurentQ({1: 1, 0: 1}))

    def test_zero_denominator(self):
        """Test a zero denominator raises ZeroDivisionError."""
        with pytest.raises(ZeroDivisionError):
            RatQ(1, 0)
        with pytest.raises(ZeroDivisionError):
            ratfunc_reduce(LaurentQ.one(), LaurentQ.zero())

    def test_field_operations(self):
        """Test division and inverse are consistent."""
        x = RatQ(LaurentQ({1: 1, 0: 1}))
        y = RatQ(LaurentQ({1: 1, 0: -1}))
        ratio = x / y
        assert not ratio.is_laurent()
        assert ratio * y == x
        assert ratio * ratio.inverse() == 1

    def test_evaluate_pole(self):
        """Test evaluation at a pole raises."""
        r = RatQ(1, LaurentQ({1: 1, 0: -1}))
        with pytest.raises(ZeroDivisionError):
            r.evaluate(1)
        assert r.evaluate(3) == Fraction(1, 2)

    def test_structural_equality(self):
        """Test equal values built differently hash alike."""
        a = RatQ(LaurentQ({1: 2}), LaurentQ({0: 2}))
        b = RatQ(LaurentQ.q())
        assert a == b
        assert hash(a) == hash(b)


class TestHbarSeries:
    """Tests for truncated h-series."""

    def test_substitute_q(self):
        """Test q becomes 1 + h + h^2/2."""
        s = hbar_substitute(LaurentQ.q(), 2)
        assert s == HbarSeries([1, 1, Fraction(1, 2)], 2)

    def test_substitute_q_minus_q_inv(self):
        """Test q - q^-1 becomes 2h with no h^2 term."""
        assert hbar_substitute(LaurentQ.q_minus_q_inv(), 2) == HbarSeries([0, 2, 0], 2)

    def test_substitute_odd_order(self):
        """Test the h^3 coefficient of q - q^-1 is 1/3."""
        s = hbar_substitute(LaurentQ.q_minus_q_inv(), 3)
        assert s == HbarSeries([0, 2, 0, Fraction(1, 3)], 3)

    def test_substitute_constant(self):
        """Test constants are unchanged at any order."""
        for order in range(4):
            assert hbar_substitute(LaurentQ.one(), order) == 1

    def test_product_truncates(self):
        """Test products drop terms beyond the truncation order."""
        h = HbarSeries.hbar(2)
        assert not (h * h * h)
        assert (h * h).coefficient(2) == 1

    def test_exp(self):
        """Test exp(h) = 1 + h + h^2/2."""
        assert HbarSeries.hbar(2).exp() == HbarSeries([1, 1, Fraction(1, 2)], 2)

    def test_exp_requires_no_constant(self):
        """Test exp of a series with a constant term is refused."""
        with pytest.raises(ValueError):
            HbarSeries.constant(1, 2).exp()

    def test_parse_and_render(self):
        """Test the textual series form survives parsing."""
        lam = lambda_ring(["v"])
        s = HbarSeries.parse("1 + 2*h^2*L_v + O(h^3)", lam)
        assert s.order == 2
        assert str(s) == "1 + 2*h^2*L_v + O(h^3)"

    def test_parse_needs_tail(self):
        """Test a series without O(h^k) is rejected."""
        with pytest.raises(ValueError):
            HbarSeries.parse("1 + h")

    def test_coefficient_beyond_order(self):
        """Test asking beyond the truncation order raises."""
        with pytest.raises(ValueError):
            HbarSeries.hbar(1).coefficient(2)

    def test_negative_order(self):
        """Test negative orders are rejected."""
        with pytest.raises(ValueError):
            hbar_substitute(LaurentQ.q(), -1)
