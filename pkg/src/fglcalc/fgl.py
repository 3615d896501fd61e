"""Formal group laws over exact coefficient rings.

A law is a bivariate series F(x, y) = x + y + higher order satisfying
commutativity and associativity up to the truncation order.  Laws are
validated eagerly at construction so nothing downstream operates on a
non-law.  The ``exact`` flag records that the stored polynomial is the
entire law (true for the additive and multiplicative laws), which
legitimizes evaluation at arguments with non-nilpotent constant parts.

The one-dimensional calculus lives here: n-series by binary addition
chains, the formal inverse by fixed-point iteration, logarithms by
integrating the reciprocal of the partial derivative, exponentials by
reversion, and transport of a law along a coordinate change.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .coefficients import Ring, RingElement
from .errors import (
    LawAxiomError,
    NotAUnitError,
    RationalsRequiredError,
    RingMismatchError,
)
from .polyseries import MultiSeries, series

X, Y = "x", "y"


def check_law_axioms(law: MultiSeries) -> None:
    """Raise LawAxiomError unless law is a commutative formal group law.

    Checks, coefficientwise up to the truncation order: F(x, 0) = x,
    F(0, y) = y, F(x, y) = F(y, x) and F(F(x, y), z) = F(x, F(y, z)).
    """
    if len(law.vars) != 2:
        raise LawAxiomError("a law needs exactly two variables")
    xv, yv = law.vars
    uni = series(law.ring, (xv,), law.trunc)
    if law.coefficient_in(yv, 0).project_vars((xv,)) != uni.var(xv):
        raise LawAxiomError("unit axiom fails: F(x, 0) != x")
    if law.coefficient_in(xv, 0).project_vars((yv,)) != series(
        law.ring, (yv,), law.trunc
    ).var(yv):
        raise LawAxiomError("unit axiom fails: F(0, y) != y")
    flipped = MultiSeries(
        law.ring,
        law.vars,
        law.trunc,
        {(e[1], e[0]): c for e, c in law.terms.items()},
        _canonical=True,
    )
    if flipped != law:
        raise LawAxiomError("commutativity fails")
    tri = series(law.ring, (xv, yv, "assoc_z"), law.trunc)
    inner_xy = law.lift_to(tri.vars)
    z = tri.var("assoc_z")
    left = law.substitute({xv: inner_xy, yv: z})
    inner_yz = law.rename_vars({xv: yv, yv: "assoc_z"}).lift_to(tri.vars)
    right = law.substitute({xv: tri.var(xv), yv: inner_yz})
    if left != right:
        raise LawAxiomError("associativity fails")


@dataclass
class FormalGroupLaw:
    """A validated commutative one-dimensional formal group law."""

    law: MultiSeries
    exact: bool = False
    name: str = ""

    def __post_init__(self):
        if self.law.vars != (X, Y):
            self.law = self.law.rename_vars(
                {self.law.vars[0]: X, self.law.vars[1]: Y}
            )

    @property
    def ring(self) -> Ring:
        return self.law.ring

    @property
    def trunc(self) -> int:
        return self.law.trunc

    def __eq__(self, other):
        if not isinstance(other, FormalGroupLaw):
            return NotImplemented
        return self.law == other.law

    def __repr__(self):
        tag = self.name or ("exact" if self.exact else "series")
        return f"<law {tag} trunc {self.trunc} over {self.ring.descriptor()}>"


def additive_law(ring: Ring, trunc: int) -> FormalGroupLaw:
    s = series(ring, (X, Y), trunc)
    return FormalGroupLaw(s.var(X) + s.var(Y), exact=True, name="additive")


def multiplicative_law(ring: Ring, trunc: int) -> FormalGroupLaw:
    s = series(ring, (X, Y), trunc)
    x, y = s.var(X), s.var(Y)
    return FormalGroupLaw(x + y - x * y, exact=True, name="multiplicative")


def from_series(law: MultiSeries, exact: bool = False, name: str = "") -> FormalGroupLaw:
    check_law_axioms(law)
    return FormalGroupLaw(law, exact=exact, name=name)


def from_log(log: MultiSeries) -> FormalGroupLaw:
    """Build the law with the given logarithm: F = exp(log x + log y).

    The log must be a univariate strict coordinate (l(0) = 0, l'(0) = 1)
    over a ring with rational scalars.
    """
    if len(log.vars) != 1:
        raise ValueError("logarithm must be univariate")
    if not log.ring.has_rational_scalars():
        raise RationalsRequiredError(
            f"{log.ring.descriptor()} does not contain the rationals"
        )
    v = log.vars[0]
    if not log.constant_term().is_zero():
        raise LawAxiomError("logarithm must vanish at 0")
    if log.coefficient((1,)) != log.ring.wrap(log.ring.one()):
        raise LawAxiomError("logarithm must be strict: l'(0) = 1")
    exp = log.reversion()
    lx = log.rename_vars({v: X}).lift_to((X, Y))
    ly = log.rename_vars({v: Y}).lift_to((X, Y))
    law = exp.rename_vars({v: X}).substitute({X: lx + ly})
    return from_series(law, exact=False, name="from_log")


# ----------------------------------------------------------------------
# applying the law

def law_apply(
    F: FormalGroupLaw,
    a: Union[MultiSeries, RingElement],
    b: Union[MultiSeries, RingElement],
):
    """a +_F b for two series in a common context or two ring elements.

    Mixed series and element arguments treat the element as a constant
    series; that direction is sound for exact laws always, and for
    truncated laws when the element is nilpotent and the law truncation
    has been sized with the headroom described in theta construction.
    """
    if isinstance(a, RingElement) and isinstance(b, RingElement):
        return F.law.eval_elements(
            {X: a, Y: b}, mode="exact" if F.exact else "strict"
        )
    if isinstance(a, RingElement):
        a = b.const(a.data) if isinstance(b, MultiSeries) else a
    if isinstance(b, RingElement):
        b = a.const(b.data)
    if not (isinstance(a, MultiSeries) and isinstance(b, MultiSeries)):
        raise TypeError("law_apply needs series or ring elements")
    if a.constant_term().is_zero() and b.constant_term().is_zero():
        mode = "strict"
    elif F.exact:
        mode = "exact"
    else:
        mode = "nilpotent"
    return F.law.substitute({X: a, Y: b}, mode=mode)


def inverse_series(F: FormalGroupLaw) -> MultiSeries:
    """The formal inverse i(x) with F(x, i(x)) = 0, as a series in x."""
    uni = series(F.ring, (X,), F.trunc)
    x = uni.var(X)
    i = -x
    for _ in range(F.trunc + 2):
        defect = law_apply(F, x, i)
        if defect.is_zero():
            return i
        i = i - defect
    if not law_apply(F, x, i).is_zero():
        raise RuntimeError("formal inverse iteration failed to converge")
    return i


def inverse_element(F: FormalGroupLaw, a: RingElement) -> RingElement:
    """The group inverse of a point: closed form for the exact laws."""
    if F.name == "additive":
        return -a
    if F.name == "multiplicative":
        # solve a + y - a y = 0
        one = a.ring.wrap(a.ring.one())
        return -(a * (one - a).inverse())
    return inverse_series(F).eval_elements({X: a})


def n_series(F: FormalGroupLaw, k: int) -> MultiSeries:
    """The k-fold formal sum [k](x) as a univariate series."""
    uni = series(F.ring, (X,), F.trunc)
    x = uni.var(X)
    if k == 0:
        return uni.zero()
    if k < 0:
        return inverse_series(F).substitute({X: n_series(F, -k)})
    result = None
    chain = x
    n = k
    while n:
        if n & 1:
            result = chain if result is None else law_apply(F, result, chain)
        n >>= 1
        if n:
            chain = law_apply(F, chain, chain)
    return result


def n_series_element(F: FormalGroupLaw, k: int, a: RingElement) -> RingElement:
    """[k](a) for a ring element, via closed forms for the exact laws."""
    ring = a.ring
    if F.name == "additive":
        return ring.wrap(ring.mul(ring.from_int(k), a.data))
    if F.name == "multiplicative":
        one = ring.wrap(ring.one())
        return one - (one - a) ** k
    if k == 0:
        return ring.wrap(ring.zero())
    if k < 0:
        return inverse_element(F, n_series_element(F, -k, a))
    result = None
    chain = a
    n = k
    while n:
        if n & 1:
            result = chain if result is None else law_apply(F, result, chain)
        n >>= 1
        if n:
            chain = law_apply(F, chain, chain)
    return result


# ----------------------------------------------------------------------
# logarithm, exponential, transport

def fgl_log(F: FormalGroupLaw) -> MultiSeries:
    """The strict logarithm: l'(x) = 1 / (dF/dy)(x, 0), l(0) = 0."""
    if not F.ring.has_rational_scalars():
        raise RationalsRequiredError(
            f"logarithms need rational scalars, not {F.ring.descriptor()}"
        )
    d = F.law.coefficient_in(Y, 1).project_vars((X,))
    return d.series_inverse().integrate(X)


def fgl_exp(F: FormalGroupLaw) -> MultiSeries:
    """The strict exponential, the compositional inverse of the log."""
    return fgl_log(F).reversion()


@dataclass
class Isomorphism:
    """A coordinate change theta carrying ``source`` to ``target``.

    target(x, y) = theta(source(theta_inv(x), theta_inv(y))).  ``strict``
    records theta'(0) = 1.
    """

    theta: MultiSeries
    theta_inv: MultiSeries
    source: FormalGroupLaw
    target: FormalGroupLaw
    strict: bool


def transport(F: FormalGroupLaw, theta: MultiSeries) -> Isomorphism:
    """Push F forward along an invertible coordinate change.

    theta must be univariate with theta(0) = 0 and unit slope.  The
    resulting law is validated before being returned.
    """
    if len(theta.vars) != 1:
        raise ValueError("theta must be univariate")
    if theta.ring != F.ring:
        raise RingMismatchError(
            f"theta lives over {theta.ring.descriptor()}, "
            f"law over {F.ring.descriptor()}"
        )
    v = theta.vars[0]
    if not theta.constant_term().is_zero():
        raise LawAxiomError("theta(0) must vanish")
    slope = theta.coefficient((1,))
    if not slope.is_unit():
        raise NotAUnitError(f"theta slope {slope} is not a unit")
    theta = theta.rename_vars({v: X})
    theta_inv = theta.reversion()
    tix = theta_inv.lift_to((X, Y))
    tiy = theta_inv.rename_vars({X: Y}).lift_to((X, Y))
    inner = F.law.substitute({X: tix, Y: tiy})
    law = theta.substitute({X: inner})
    target = from_series(law, exact=False, name="transported")
    one = F.ring.wrap(F.ring.one())
    return Isomorphism(
        theta=theta,
        theta_inv=theta_inv,
        source=F,
        target=target,
        strict=slope == one,
    )


def is_homomorphism(
    f: MultiSeries, F: FormalGroupLaw, G: FormalGroupLaw
) -> bool:
    """Does f carry F to G, i.e. f(F(x, y)) = G(f(x), f(y))?"""
    if len(f.vars) != 1:
        raise ValueError("f must be univariate")
    v = f.vars[0]
    f = f.rename_vars({v: X})
    lhs = f.substitute({X: F.law})
    fx = f.lift_to((X, Y))
    fy = f.rename_vars({X: Y}).lift_to((X, Y))
    rhs = G.law.substitute({X: fx, Y: fy})
    return lhs == rhs
