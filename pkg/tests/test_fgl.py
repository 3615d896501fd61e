"""Formal group laws: axioms, logs, n-series, transport."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fglcalc.coefficients import Integers, IntegersMod, Rationals
from fglcalc.errors import (
    LawAxiomError,
    NotAUnitError,
    RationalsRequiredError,
)
from fglcalc.fgl import (
    additive_law,
    check_law_axioms,
    fgl_exp,
    fgl_log,
    from_log,
    from_series,
    inverse_series,
    is_homomorphism,
    law_apply,
    multiplicative_law,
    n_series,
    n_series_element,
    transport,
)
from fglcalc.polyseries import series

QQ = Rationals()


def test_additive_law_shape():
    F = additive_law(QQ, 6)
    assert F.exact
    assert F.name == "additive"
    assert F.law.sorted_terms() == [
        ((0, 1), Fraction(1)),
        ((1, 0), Fraction(1)),
    ]
    check_law_axioms(F.law)


def test_multiplicative_law_shape():
    F = multiplicative_law(QQ, 6)
    assert F.exact
    assert F.law.sorted_terms() == [
        ((0, 1), Fraction(1)),
        ((1, 0), Fraction(1)),
        ((1, 1), Fraction(-1)),
    ]
    check_law_axioms(F.law)


def test_axiom_checker_rejects_non_commutative():
    c = series(QQ, ("x", "y"), 4)
    x, y = c.var("x"), c.var("y")
    bad = x + y + x * y * y
    with pytest.raises(LawAxiomError):
        check_law_axioms(bad)


def test_axiom_checker_rejects_wrong_unit():
    c = series(QQ, ("x", "y"), 4)
    x, y = c.var("x"), c.var("y")
    bad = x + y + x * x
    with pytest.raises(LawAxiomError):
        check_law_axioms(bad)


def test_log_exp_of_multiplicative():
    F = multiplicative_law(QQ, 7)
    lg = fgl_log(F)
    # -log(1-x) has coefficients 1/k
    for k in range(1, 8):
        assert lg.coefficient([k]) == Fraction(1, k)
    ex = fgl_exp(F)
    # 1 - e^{-x}
    fact = 1
    for k in range(1, 8):
        fact *= k
        assert ex.coefficient([k]) == Fraction((-1) ** (k + 1), fact)
    assert lg.substitute({"x": ex}).sorted_terms() == [((1,), Fraction(1))]


def test_log_needs_rational_scalars():
    F = multiplicative_law(Integers(), 5)
    with pytest.raises(RationalsRequiredError):
        fgl_log(F)


def test_from_log_cubic_example():
    c = series(QQ, ("x",), 6)
    x = c.var("x")
    F = from_log(x + c.const(Fraction(1, 3)) * x**3)
    assert F.name == "from_log"
    check_law_axioms(F.law)
    # odd log means the law has [-1](x) = -x
    inv = inverse_series(F)
    assert inv.coefficient([1]) == Fraction(-1)
    assert inv.coefficient([2]) == 0


def test_n_series_closed_forms():
    import math

    Fa = additive_law(QQ, 8)
    Fm = multiplicative_law(QQ, 8)
    for k in (-3, -1, 0, 1, 2, 5):
        na = n_series(Fa, k)
        assert na.sorted_terms() == ([] if k == 0 else [((1,), Fraction(k))])
    for k in (0, 1, 2, 5):
        nm = n_series(Fm, k)
        # [k](x) = 1 - (1-x)^k
        for j in range(1, 9):
            assert nm.coefficient([j]) == Fraction((-1) ** (j + 1)) * math.comb(k, j)
    # negative k against exact elements
    assert n_series_element(Fm, -1, QQ.el(Fraction(1, 2))).data == Fraction(-1)


def test_n_series_element_exact_closed_form():
    Fm = multiplicative_law(QQ, 4)
    a = QQ.el(Fraction(1, 3))
    # 1 - (1-a)^k holds for negative k too on exact laws
    for k in range(-5, 6):
        got = n_series_element(Fm, k, a).data
        assert got == 1 - Fraction(2, 3) ** k
    Fa = additive_law(QQ, 4)
    assert n_series_element(Fa, 7, a).data == Fraction(7, 3)


def test_law_apply_on_elements():
    Fm = multiplicative_law(QQ, 4)
    a, b = QQ.el(Fraction(1, 2)), QQ.el(Fraction(1, 3))
    got = law_apply(Fm, a, b)
    assert got.data == Fraction(1, 2) + Fraction(1, 3) - Fraction(1, 6)


def test_transport_reproduces_multiplicative_from_additive():
    # theta = 1 - e^{-x} carries the additive law to the multiplicative one
    T = 7
    Fa = additive_law(QQ, T)
    theta = fgl_exp(multiplicative_law(QQ, T))
    iso = transport(Fa, theta)
    assert iso.source is Fa
    assert iso.target.name == "transported"
    assert not iso.target.exact
    expected = multiplicative_law(QQ, T).law
    assert iso.target.law.sorted_terms() == expected.sorted_terms()
    check_law_axioms(iso.target.law)
    # theta_inv really is the compositional inverse
    assert iso.theta.substitute({"x": iso.theta_inv}).sorted_terms() == [
        ((1,), Fraction(1))
    ]


def test_transport_is_homomorphism_witness():
    T = 6
    Fa = additive_law(QQ, T)
    c = series(QQ, ("x",), T)
    x = c.var("x")
    theta = x + c.const(Fraction(2)) * x**2
    iso = transport(Fa, theta)
    assert is_homomorphism(iso.theta, Fa, iso.target)
    assert is_homomorphism(iso.theta_inv, iso.target, Fa)
    # a coordinate change without unit slope is not accepted
    with pytest.raises(NotAUnitError):
        transport(Fa, x * x)


def test_homomorphism_frobenius_mod_p():
    # x -> x^p is an endomorphism of any law over F_p; check the additive one
    p = 5
    Fp = IntegersMod(p)
    Fa = additive_law(Fp, 10)
    c = series(Fp, ("x",), 10)
    frob = c.var("x") ** p
    assert is_homomorphism(frob, Fa, Fa)
    assert not is_homomorphism(frob + c.var("x") ** 2, Fa, Fa)


def test_from_series_marks_inexact():
    c = series(QQ, ("x", "y"), 5)
    x, y = c.var("x"), c.var("y")
    F = from_series(x + y - x * y, exact=False, name="")
    assert not F.exact
    assert n_series(F, 3).coefficient([1]) == 3


@settings(derandomize=True, max_examples=30)
@given(st.integers(-6, 6), st.integers(-6, 6))
def test_n_series_additivity(m, n):
    # [m+n](x) = F([m](x), [n](x)) for the multiplicative law
    Fm = multiplicative_law(QQ, 6)
    lhs = n_series(Fm, m + n)
    rhs = law_apply(Fm, n_series(Fm, m), n_series(Fm, n))
    assert lhs.sorted_terms() == rhs.sorted_terms()


@settings(derandomize=True, max_examples=30)
@given(
    st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3)),
    st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3)),
)
def test_from_log_symmetry(a2, a3):
    c = series(QQ, ("x",), 5)
    x = c.var("x")
    F = from_log(x + c.const(a2) * x**2 + c.const(a3) * x**3)
    check_law_axioms(F.law)
    for (i, j), coeff in F.law.sorted_terms():
        assert F.law.coefficient([j, i]) == coeff
