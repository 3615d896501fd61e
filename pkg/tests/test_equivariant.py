"""Equivariant contexts, weighted bundles, Euler classes."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fglcalc.equivariant import (
    additive_context,
    bundle,
    euler_class,
    loop_normal_bundle,
    multiplicative_context,
    unit_check,
)
from fglcalc.errors import TailOverflowError


def test_additive_division_points():
    ctx = additive_context(trunc=4, qhat_order=6, tail=6)
    assert ctx.division_point(3).data == {1: Fraction(3)}
    assert ctx.division_point(-2).data == {1: Fraction(-2)}
    assert ctx.division_point(0).data == {}


def test_multiplicative_division_points():
    # qhat = 1 - q, so [k](qhat) = 1 - q^k exactly
    ctx = multiplicative_context(trunc=4, q_order=6, tail=6)
    assert ctx.qhat.data == {0: Fraction(1), 1: Fraction(-1)}
    assert ctx.division_point(2).data == {0: Fraction(1), 2: Fraction(-1)}
    assert ctx.division_point(3).data == {0: Fraction(1), 3: Fraction(-1)}
    assert ctx.division_point(-1).data == {0: Fraction(1), -1: Fraction(-1)}


def test_euler_class_weight_blocks():
    ctx = additive_context(trunc=4, qhat_order=6, tail=6)
    # rank-1 trivial bundle with weight k: euler class is [k](qhat)
    b = bundle(ctx, [(None, 1, 1), (None, -1, 1)])
    e = euler_class(b)
    assert e.vars == ()
    assert e.coefficient([]).data == {2: Fraction(-1)}  # qhat * (-qhat)


def test_euler_class_root_blocks():
    ctx = additive_context(trunc=4, qhat_order=6, tail=6)
    # weight 0 with a root: the bare first Chern root
    b0 = bundle(ctx, [("h", 0, 1)])
    assert euler_class(b0).sorted_terms() == [((1,), b0.context.ring.one())]
    # nonzero weight: root translated by the division point under the law
    b1 = bundle(ctx, [("h", 2, 1)])
    e = euler_class(b1)
    assert e.coefficient([1]).data == {0: Fraction(1)}
    assert e.coefficient([0]).data == {1: Fraction(2)}


def test_euler_class_multiplicities_multiply():
    ctx = additive_context(trunc=4, qhat_order=8, tail=8)
    b = bundle(ctx, [(None, 1, 3)])
    assert euler_class(b).coefficient([]).data == {3: Fraction(1)}


def test_euler_class_trivial_weight_zero_is_zero():
    ctx = additive_context(trunc=3, qhat_order=4, tail=4)
    b = bundle(ctx, [(None, 0, 2)])
    assert euler_class(b).is_zero()
    assert not unit_check(b)


def test_unit_check_requires_localization():
    loc = additive_context(trunc=3, qhat_order=6, tail=6, unit_bound=4)
    unloc = additive_context(
        trunc=3, qhat_order=6, tail=6, localized=False, unit_bound=4
    )
    b = bundle(loc, [(None, 1, 1)])
    assert unit_check(b)
    assert not unit_check(bundle(unloc, [(None, 1, 1)]))


def test_unit_check_respects_window_depth():
    # inverting qhat^2 needs tail >= 2; a shallow window reports False
    deep = additive_context(trunc=3, qhat_order=4, tail=4)
    shallow = additive_context(trunc=3, qhat_order=4, tail=1)
    b = [(None, 1, 1), (None, -1, 1)]
    assert unit_check(bundle(deep, b))
    assert not unit_check(bundle(shallow, b))


def test_loop_normal_bundle_shape():
    ctx = additive_context(trunc=3, qhat_order=8, tail=8)
    nb = loop_normal_bundle(ctx, [("h", 1)], 2)
    assert nb.rank() == 4
    assert set(nb.blocks) == {("h", 1, 1), ("h", -1, 1), ("h", 2, 1), ("h", -2, 1)}
    # euler class: prod over 0<|k|<=2 of (h + [k](qhat)) = (h^2-qhat^2)(h^2-4qhat^2)
    e = euler_class(nb)
    assert e.coefficient([0]).data == {4: Fraction(4)}
    assert e.coefficient([2]).data == {2: Fraction(-5)}
    assert e.coefficient([3]).is_zero()


def test_loop_normal_bundle_multiplicative():
    ctx = multiplicative_context(trunc=3, q_order=8, tail=8)
    nb = loop_normal_bundle(ctx, [("h", 1)], 1)
    e = euler_class(nb)
    # (1 - q + qh)(1 - q^{-1} + q^{-1}h)
    assert e.coefficient([0]).data == {
        -1: Fraction(-1),
        0: Fraction(2),
        1: Fraction(-1),
    }
    assert e.coefficient([1]).data == {
        -1: Fraction(1),
        0: Fraction(-2),
        1: Fraction(1),
    }
    assert e.coefficient([2]).data == {0: Fraction(1)}


def test_rank_counts_multiplicity():
    ctx = additive_context(trunc=3, qhat_order=4, tail=4)
    b = bundle(ctx, [("h", 1, 2), (None, -1, 3)])
    assert b.rank() == 5
    assert b.root_vars() == ("h",)


@settings(derandomize=True, max_examples=25)
@given(st.integers(-5, 5), st.integers(-5, 5))
def test_division_points_add_under_law(m, n):
    # [m+n](qhat) = F([m](qhat), [n](qhat)) in both standard contexts
    for ctx in (
        additive_context(trunc=4, qhat_order=12, tail=12),
        multiplicative_context(trunc=4, q_order=12, tail=12),
    ):
        lhs = ctx.division_point(m + n)
        ring = ctx.ring
        a, b = ctx.division_point(m), ctx.division_point(n)
        # F(a, b) for the exact ambient laws
        from fglcalc.fgl import law_apply

        rhs = law_apply(ctx.law, a, b)
        assert lhs.data == rhs.data, (m, n)
