"""Coefficient ring layer: payload arithmetic, windows, quotients."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fglcalc.coefficients import (
    GaussianRationals,
    Integers,
    IntegersMod,
    LaurentPolynomials,
    LaurentSeries,
    PowerSeries,
    Rationals,
    parse_ring,
    quotient_ring,
)
from fglcalc.errors import NotAUnitError, TailOverflowError

QQ = Rationals()


def test_rationals_basic():
    a = QQ.from_fraction(Fraction(2, 3))
    b = QQ.from_int(4)
    assert QQ.mul(a, b) == Fraction(8, 3)
    assert QQ.invert(a) == Fraction(3, 2)
    assert QQ.parse(QQ.text(a)) == a


def test_integers_localized_inverts_named_primes():
    Z6 = Integers((2, 3))
    assert Z6.invert(Fraction(2)) == Fraction(1, 2)
    with pytest.raises(NotAUnitError):
        Z6.invert(Fraction(5))


def test_integers_mod_units():
    Z9 = IntegersMod(9)
    assert Z9.mul(Z9.from_int(4), Z9.from_int(7)) == 1
    assert Z9.invert(Z9.from_int(4)) == 7
    with pytest.raises(NotAUnitError):
        Z9.invert(Z9.from_int(3))


def test_gaussian_rationals():
    QI = GaussianRationals()
    i = QI.i()
    assert QI.mul(i, i) == QI.from_int(-1)
    # (1+i)(1-i) = 2
    a = QI.add(QI.one(), i)
    b = QI.sub(QI.one(), i)
    assert QI.mul(a, b) == QI.from_int(2)
    assert QI.parse(QI.text(a)) == a


def test_power_series_invert_newton():
    R = PowerSeries(QQ, "q", 8)
    one_minus_q = R.sub(R.one(), R.param_payload(1))
    inv = R.invert(one_minus_q)
    assert inv == {k: Fraction(1) for k in range(9)}
    assert R.mul(one_minus_q, inv) == R.one()


def test_laurent_window_contract():
    R = LaurentSeries(QQ, "q", 4, 2)
    el = R.param_payload(-2)
    # q^{-2} * q^{-1} would leave the window below: hard error
    with pytest.raises(TailOverflowError):
        R.mul(el, R.param_payload(-1))
    # above the order: silent truncation
    top = R.mul(R.param_payload(3), R.param_payload(3))
    assert top == {}


def test_laurent_invert_monomial_lead():
    R = LaurentSeries(QQ, "q", 6, 3)
    # 2q - q^2 = 2q(1 - q/2)
    el = {1: Fraction(2), 2: Fraction(-1)}
    inv = R.invert(el)
    assert inv[-1] == Fraction(1, 2)
    prod = R.mul(el, inv)
    # exact up to the order minus the inversion depth
    assert prod[0] == 1
    assert all(prod.get(k, Fraction(0)) == 0 for k in range(1, 5))


def test_laurent_polynomials_exact():
    LP = LaurentPolynomials(Integers(), "L")
    a = {1: 1, -1: 1}  # L + L^{-1}
    sq = LP.mul(a, a)
    assert sq == {2: 1, 0: 2, -2: 1}


def test_quotient_ring_quadratic_relation():
    # w^2 = 2
    R = quotient_ring(QQ, ["w"], {"w": (2, {(0,): Fraction(2)})})
    w = R.gen_payload("w")
    assert R.mul(w, w) == R.from_int(2)
    # (1 + w)^2 = 3 + 2w
    a = R.add(R.one(), w)
    assert R.mul(a, a) == R.add(R.from_int(3), R.mul(R.from_int(2), w))


def test_quotient_ring_free_generators_and_nilpotency():
    R = quotient_ring(QQ, ["a"], {"a": None})
    a = R.gen_payload("a")
    assert R.nilpotency_order(a, 10) is None
    Rn = quotient_ring(IntegersMod(4), ["e"], {"e": (2, {})})
    e = Rn.gen_payload("e")
    assert Rn.mul(e, e) == Rn.zero()
    assert Rn.nilpotency_order(e, 10) == 2


def test_ring_descriptor_round_trip():
    rings = [
        QQ,
        GaussianRationals(),
        Integers(),
        Integers((2, 5)),
        IntegersMod(7),
        PowerSeries(QQ, "q", 5),
        LaurentSeries(Integers(), "q", 4, 2),
        PowerSeries(LaurentPolynomials(Integers(), "L"), "q", 3),
    ]
    for R in rings:
        assert parse_ring(R.descriptor()) == R


def test_series_payload_text_round_trip():
    R = PowerSeries(LaurentPolynomials(Integers(), "L"), "q", 3)
    payload = {0: {0: 1, 1: -1}, 2: {-1: 3, 2: -3}}
    assert R.parse(R.text(R.normalize(payload))) == R.normalize(payload)


frac = st.builds(
    Fraction, st.integers(-9, 9), st.integers(1, 5)
)


@settings(derandomize=True, max_examples=60)
@given(frac, frac, frac)
def test_rationals_ring_axioms(a, b, c):
    assert QQ.add(QQ.add(a, b), c) == QQ.add(a, QQ.add(b, c))
    assert QQ.mul(a, b) == QQ.mul(b, a)
    assert QQ.mul(a, QQ.add(b, c)) == QQ.add(QQ.mul(a, b), QQ.mul(a, c))


@settings(derandomize=True, max_examples=60)
@given(st.integers(0, 11), st.integers(0, 11), st.integers(0, 11))
def test_integers_mod_ring_axioms(a, b, c):
    Z12 = IntegersMod(12)
    a, b, c = Z12.from_int(a), Z12.from_int(b), Z12.from_int(c)
    assert Z12.add(Z12.add(a, b), c) == Z12.add(a, Z12.add(b, c))
    assert Z12.mul(a, b) == Z12.mul(b, a)
    assert Z12.mul(a, Z12.add(b, c)) == Z12.add(Z12.mul(a, b), Z12.mul(a, c))


@settings(derandomize=True, max_examples=40)
@given(
    st.dictionaries(st.integers(0, 4), frac, max_size=4),
    st.dictionaries(st.integers(0, 4), frac, max_size=4),
)
def test_power_series_commutative_associative(pa, pb):
    R = PowerSeries(QQ, "q", 6)
    pa, pb = R.normalize(pa), R.normalize(pb)
    assert R.mul(pa, pb) == R.mul(pb, pa)
    assert R.mul(R.mul(pa, pb), pa) == R.mul(pa, R.mul(pb, pa))
