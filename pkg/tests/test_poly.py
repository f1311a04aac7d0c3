from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from khovsolve.fields import GF, QQ
from khovsolve.poly import MultiPoly, PolySyntaxError, WeightOrder, parse_polynomial

VARS = ("t1", "t2")


def P(s, field=QQ, varnames=VARS):
    return parse_polynomial(s, varnames, field)


def test_parse_duffing_equation():
    f = P("1+3*t1+5*t2+7*t1*(t1^2+t2^2)")
    assert f.terms == {
        (0, 0): Fraction(1),
        (1, 0): Fraction(3),
        (0, 1): Fraction(5),
        (3, 0): Fraction(7),
        (1, 2): Fraction(7),
    }


def test_parse_signs_and_parens():
    f = P("-t1 + 2*(t2 - 1)^2")
    g = P("2*t2^2 - 4*t2 - t1 + 2")
    assert f == g


def test_parse_rational_literal():
    f = P("1/2*t1 - 3/4")
    assert f.terms == {(1, 0): Fraction(1, 2), (0, 0): Fraction(-3, 4)}


def test_parse_over_prime_field():
    f = P("102*t1 + 1/2", field=GF(101))
    assert f.terms == {(1, 0): 1, (0, 0): GF(101).inv(2)}


def test_parse_errors_carry_position():
    with pytest.raises(PolySyntaxError) as err:
        P("t1 + t9")
    assert err.value.position == 5
    with pytest.raises(PolySyntaxError):
        P("t1 +")
    with pytest.raises(PolySyntaxError):
        P("(t1")
    with pytest.raises(PolySyntaxError):
        P("t1^t2")
    with pytest.raises(PolySyntaxError):
        P("t1 t2")


def test_weight_order_minimal_convention():
    ord_ = WeightOrder((0, -1))
    f = P("t1^3 + t1*t2^2")
    # weights: t1^3 -> 0, t1*t2^2 -> -2; minimal weight leads
    assert f.leading_exponent(ord_) == (1, 2)
    g = P("t1 + t2")
    # weight tie; graded-lex tiebreak picks the smaller exponent tuple
    assert g.leading_exponent(WeightOrder((-1, -1))) == (0, 1)


def test_tiebreak_graded_lex():
    ord_ = WeightOrder((0, 0))
    f = P("t1*t2 + t1 + t2^2")
    # all weights 0; lowest total degree wins the tiebreak
    assert f.leading_exponent(ord_) == (1, 0)


def test_arithmetic_and_pow():
    f = P("t1 + t2")
    assert f**0 == P("1")
    assert f**3 == P("t1^3 + 3*t1^2*t2 + 3*t1*t2^2 + t2^3")
    assert (f - f).is_zero()
    assert f.scale(Fraction(0)).is_zero()
    with pytest.raises(ValueError):
        f ** (-1)


def test_evaluate_exact():
    f = P("t1^2*t2 - 1/3")
    assert f.evaluate((Fraction(2), Fraction(1, 2))) == Fraction(2) - Fraction(1, 3)
    F = GF(7)
    g = P("t1^2 + t2", field=F)
    assert g.evaluate((3, 5)) == (9 + 5) % 7


def test_to_string_round_trip_simple():
    for s in ("0", "1", "-t1", "t1^2 - 2*t2 + 1/2", "3*t1*t2^2"):
        f = P(s)
        assert P(f.to_string()) == f


@st.composite
def rational_polys(draw):
    nterms = draw(st.integers(0, 6))
    terms = {}
    for _ in range(nterms):
        e = (draw(st.integers(0, 4)), draw(st.integers(0, 4)))
        c = Fraction(draw(st.integers(-9, 9)), draw(st.integers(1, 9)))
        if c:
            terms[e] = c
    return MultiPoly(QQ, VARS, terms)


@given(rational_polys())
@settings(max_examples=60, deadline=None)
def test_to_string_round_trip_property(f):
    assert parse_polynomial(f.to_string(), VARS, QQ) == f


@given(rational_polys(), rational_polys(), rational_polys())
@settings(max_examples=40, deadline=None)
def test_ring_axioms_property(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert f + (g + h) == (f + g) + h


@given(rational_polys(), rational_polys())
@settings(max_examples=40, deadline=None)
def test_evaluation_is_multiplicative(f, g):
    pt = (Fraction(2, 3), Fraction(-1, 2))
    assert (f * g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt)


def test_mismatched_variables_rejected():
    f = P("t1")
    g = parse_polynomial("s1", ("s1",), QQ)
    with pytest.raises(ValueError):
        f + g


def test_invalid_exponent_vectors_rejected():
    with pytest.raises(ValueError):
        MultiPoly(QQ, VARS, {(1,): Fraction(1)})
    with pytest.raises(ValueError):
        MultiPoly(QQ, VARS, {(-1, 0): Fraction(1)})


def test_zero_polynomial_has_no_leading_exponent():
    with pytest.raises(ValueError):
        MultiPoly.zero(QQ, VARS).leading_exponent(WeightOrder((0, -1)))
