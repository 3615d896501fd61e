"""Truncated multivariate series: arithmetic, substitution, reversion."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fglcalc.coefficients import IntegersMod, Rationals, quotient_ring
from fglcalc.errors import ConstantTermError, NotAUnitError, RingMismatchError
from fglcalc.polyseries import series

QQ = Rationals()


def ctx(trunc=6, vars=("x",)):
    return series(QQ, vars, trunc)


def test_basic_arithmetic_and_terms():
    c = ctx(4, ("x", "y"))
    x, y = c.var("x"), c.var("y")
    f = (x + y) ** 2
    assert f.sorted_terms() == [
        ((0, 2), Fraction(1)),
        ((1, 1), Fraction(2)),
        ((2, 0), Fraction(1)),
    ]
    assert f.coefficient([1, 1]) == Fraction(2)
    assert (f - f).is_zero()


def test_truncation_drops_high_degree():
    c = ctx(3)
    x = c.var("x")
    f = (c.one() + x) ** 5
    # binomials above degree 3 discarded
    assert f.sorted_terms() == [
        ((0,), Fraction(1)),
        ((1,), Fraction(5)),
        ((2,), Fraction(10)),
        ((3,), Fraction(10)),
    ]
    assert f.max_degree() == 3


def test_series_inverse_geometric():
    c = ctx(7)
    x = c.var("x")
    g = (c.one() - x).series_inverse()
    assert all(g.coefficient([k]) == 1 for k in range(8))
    with pytest.raises(NotAUnitError):
        x.series_inverse()


def test_substitute_strict_requires_no_constant_term():
    c = ctx(5)
    x = c.var("x")
    f = x + x * x
    with pytest.raises(ConstantTermError):
        f.substitute({"x": c.one() + x})
    g = f.substitute({"x": x + x * x})
    # (x + x^2) + (x + x^2)^2
    assert g.coefficient([2]) == 2
    assert g.coefficient([3]) == 2
    assert g.coefficient([4]) == 1


def test_substitute_nilpotent_mode_allows_nilpotent_constant():
    R = quotient_ring(IntegersMod(4), ["e"], {"e": (2, {})})
    c = series(R, ("x",), 4)
    x = c.var("x")
    e = c.const(R.wrap(R.gen_payload("e")))
    f = x * x
    g = f.substitute({"x": x + e}, mode="nilpotent")
    # (x + e)^2 = x^2 + 2ex since e^2 = 0
    assert g.coefficient([2]) == R.wrap(R.one())
    assert g.coefficient([1]) == R.wrap(R.mul(R.from_int(2), R.gen_payload("e")))


def test_reversion_exp_log_round_trip():
    c = ctx(8)
    x = c.var("x")
    # exp(x) - 1
    expm1 = c.zero()
    fact = 1
    for k in range(1, 9):
        fact *= k
        expm1 = expm1 + c.const(Fraction(1, fact)) * x**k
    log1p = expm1.reversion()
    for k in range(1, 9):
        assert log1p.coefficient([k]) == Fraction((-1) ** (k + 1), k)
    assert expm1.substitute({"x": log1p}).sorted_terms() == [((1,), Fraction(1))]


def test_integrate_derivative_inverse():
    c = ctx(6)
    x = c.var("x")
    f = x + c.const(Fraction(3)) * x**4
    assert f.integrate("x").derivative("x").sorted_terms() == f.sorted_terms()
    g = f.derivative("x")
    assert g.coefficient([0]) == 1
    assert g.coefficient([3]) == 12


def test_rename_lift_project():
    c = ctx(4, ("x",))
    f = c.var("x") ** 2
    g = f.rename_vars({"x": "t"})
    assert g.vars == ("t",)
    h = g.lift_to(("t", "u"))
    assert h.coefficient([2, 0]) == 1
    back = h.project_vars(("t",))
    assert back.sorted_terms() == g.sorted_terms()


def test_coefficient_in_partial_extraction():
    c = ctx(5, ("x", "q"))
    x, q = c.var("x"), c.var("q")
    f = x * q + x * x * q + x * q * q
    fx = f.coefficient_in("x", 1)
    assert fx.sorted_terms() == [((0, 1), Fraction(1)), ((0, 2), Fraction(1))]


def test_eval_elements():
    c = ctx(5)
    x = c.var("x")
    f = c.one() + x + x * x
    # exact mode: the polynomial is the whole series, so a non-nilpotent
    # value is fine
    v = f.eval_elements({"x": QQ.el(Fraction(1, 2))}, mode="exact")
    assert v.data == Fraction(7, 4)
    with pytest.raises(ConstantTermError):
        f.eval_elements({"x": QQ.el(Fraction(1, 2))})


def test_trunc_mismatch_is_an_error():
    a = ctx(4).var("x")
    b = ctx(5).var("x")
    with pytest.raises(RingMismatchError):
        _ = a + b


def test_with_trunc_lowers():
    c = ctx(6)
    x = c.var("x")
    f = (c.one() - x).series_inverse().with_trunc(2)
    assert f.sorted_terms() == [
        ((0,), Fraction(1)),
        ((1,), Fraction(1)),
        ((2,), Fraction(1)),
    ]


frac = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def poly_of(c, coeffs):
    x = c.var("x")
    f = c.zero()
    for k, a in enumerate(coeffs):
        f = f + c.const(a) * x**k
    return f


@settings(derandomize=True, max_examples=40)
@given(
    st.lists(frac, min_size=1, max_size=4),
    st.lists(frac, min_size=1, max_size=4),
    st.lists(frac, min_size=1, max_size=4),
)
def test_ring_axioms_for_series(ca, cb, cc):
    c = ctx(5)
    f, g, h = poly_of(c, ca), poly_of(c, cb), poly_of(c, cc)
    assert ((f * g) * h).sorted_terms() == (f * (g * h)).sorted_terms()
    assert (f * g).sorted_terms() == (g * f).sorted_terms()
    assert (f * (g + h)).sorted_terms() == (f * g + f * h).sorted_terms()


@settings(derandomize=True, max_examples=40)
@given(st.lists(frac, min_size=2, max_size=5))
def test_series_inverse_is_two_sided(coeffs):
    c = ctx(6)
    f = poly_of(c, coeffs)
    if f.constant_term().is_zero():
        f = f + c.one()
    g = f.series_inverse()
    assert (f * g).sorted_terms() == [((0,), Fraction(1))]
