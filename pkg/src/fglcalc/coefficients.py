"""Exact coefficient rings for the series engine.

Every ring is a small immutable descriptor object that knows how to
operate on raw payloads:

    rationals               Fraction
    gaussian rationals      (Fraction, Fraction), real and imaginary parts
    integers                Fraction whose denominator divides a power of
                            the declared inverted elements
    integers mod m          int in [0, m)
    power series            {exponent: base payload}, 0 <= exponent <= order
    laurent series          {exponent: base payload}, -tail <= exponent <= order
    laurent polynomials     {exponent: base payload}, any integer exponent, exact
    polynomial quotients    {(e_1, ..., e_r): base payload} reduced by the
                            ring's rewrite relations

Payloads never store explicit zeros, so payload equality is plain ``==``.
Rings nest freely (a Laurent series ring over a quotient ring over the
integers is fine) and the same operation set works at every level.

Truncated series semantics: a power series ring of order N is the honest
quotient by q^(N+1), so truncation commutes with every operation.  Laurent
windows are sharper at the bottom than at the top: exponents that would
fall below -tail raise TailOverflowError, exponents above the order are
dropped.  When negative and positive exponents mix, coefficients within
(combined negative valuation) of the order can be silently lost, so
computations allocate order headroom and read answers only below it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Optional

from .errors import (
    NotAUnitError,
    RingMismatchError,
    TailOverflowError,
    UnrepresentableError,
)

Payload = Any


class Ring:
    """Common operation set.  Subclasses define the payload convention."""

    def zero(self) -> Payload:
        raise NotImplementedError

    def one(self) -> Payload:
        return self.from_int(1)

    def from_int(self, n: int) -> Payload:
        raise NotImplementedError

    def from_fraction(self, fr: Fraction) -> Payload:
        raise NotImplementedError

    def add(self, a: Payload, b: Payload) -> Payload:
        raise NotImplementedError

    def neg(self, a: Payload) -> Payload:
        raise NotImplementedError

    def sub(self, a: Payload, b: Payload) -> Payload:
        return self.add(a, self.neg(b))

    def mul(self, a: Payload, b: Payload) -> Payload:
        raise NotImplementedError

    def is_zero(self, a: Payload) -> bool:
        return a == self.zero()

    def eq(self, a: Payload, b: Payload) -> bool:
        # payloads are canonical, so structural equality is ring equality
        return a == b

    def is_unit(self, a: Payload) -> bool:
        try:
            self.invert(a)
        except NotAUnitError:
            return False
        return True

    def invert(self, a: Payload) -> Payload:
        raise NotImplementedError

    def pow(self, a: Payload, n: int) -> Payload:
        if n < 0:
            return self.pow(self.invert(a), -n)
        result = self.one()
        square = a
        while n:
            if n & 1:
                result = self.mul(result, square)
            n >>= 1
            if n:
                square = self.mul(square, square)
        return result

    def sum(self, items: Iterable[Payload]) -> Payload:
        total = self.zero()
        for item in items:
            total = self.add(total, item)
        return total

    def prod(self, items: Iterable[Payload]) -> Payload:
        total = self.one()
        for item in items:
            total = self.mul(total, item)
        return total

    def nilpotency_order(self, a: Payload, cap: int) -> Optional[int]:
        """Smallest k <= cap with a^k = 0, or None."""
        power = a
        for k in range(1, cap + 1):
            if self.is_zero(power):
                return k
            power = self.mul(power, a)
        return None

    def has_rational_scalars(self) -> bool:
        raise NotImplementedError

    def normalize(self, data: Payload) -> Payload:
        """Bring externally built data into canonical form."""
        return data

    def text(self, a: Payload) -> str:
        raise NotImplementedError

    def parse(self, s: str) -> Payload:
        raise NotImplementedError

    def descriptor(self) -> str:
        raise NotImplementedError

    def wrap(self, data: Payload) -> "RingElement":
        return RingElement(self, data)

    def el(self, value: "int | Fraction | Payload" = 0, *, raw: bool = False) -> "RingElement":
        """Convenience element constructor from int or Fraction."""
        if raw:
            return RingElement(self, self.normalize(value))
        if isinstance(value, bool):
            raise TypeError("bool is not a ring value")
        if isinstance(value, int):
            return RingElement(self, self.from_int(value))
        if isinstance(value, Fraction):
            return RingElement(self, self.from_fraction(value))
        raise TypeError(f"cannot build element from {value!r}")


_FRACTION_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def _parse_fraction(s: str) -> Fraction:
    s = s.strip()
    if not _FRACTION_RE.match(s):
        raise ValueError(f"not a rational literal: {s!r}")
    return Fraction(s)


def _split_top(s: str, sep: str = ",") -> list[str]:
    """Split at top level, respecting (), [], {} nesting."""
    parts: list[str] = []
    depth = 0
    current: list[str] = []
    for ch in s:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced brackets in {s!r}")
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise ValueError(f"unbalanced brackets in {s!r}")
    if current or parts:
        parts.append("".join(current))
    return parts


def _split_exponent_entry(entry: str) -> tuple[str, str]:
    """Break 'exp:coeff' at the first top-level colon."""
    depth = 0
    for i, ch in enumerate(entry):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        elif ch == ":" and depth == 0:
            return entry[:i], entry[i + 1 :]
    raise ValueError(f"missing exponent separator in {entry!r}")


@dataclass(frozen=True)
class Rationals(Ring):
    def zero(self):
        return Fraction(0)

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, fr):
        return Fraction(fr)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def invert(self, a):
        if a == 0:
            raise NotAUnitError("0 is not invertible in Q")
        return 1 / a

    def has_rational_scalars(self):
        return True

    def text(self, a):
        return str(a)

    def parse(self, s):
        return _parse_fraction(s)

    def descriptor(self):
        return "Q"


_GAUSS_RE = re.compile(r"^([+-]?\d+(?:/\d+)?)(?:([+-]\d+(?:/\d+)?)i)?$")


@dataclass(frozen=True)
class GaussianRationals(Ring):
    """Q(i) with payload (re, im)."""

    def zero(self):
        return (Fraction(0), Fraction(0))

    def from_int(self, n):
        return (Fraction(n), Fraction(0))

    def from_fraction(self, fr):
        return (Fraction(fr), Fraction(0))

    def i(self):
        return (Fraction(0), Fraction(1))

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1])

    def neg(self, a):
        return (-a[0], -a[1])

    def mul(self, a, b):
        return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    def invert(self, a):
        norm = a[0] * a[0] + a[1] * a[1]
        if norm == 0:
            raise NotAUnitError("0 is not invertible in Q(i)")
        return (a[0] / norm, -a[1] / norm)

    def has_rational_scalars(self):
        return True

    def text(self, a):
        re_part, im_part = a
        if im_part == 0:
            return str(re_part)
        sign = "+" if im_part > 0 else "-"
        return f"{re_part}{sign}{abs(im_part)}i"

    def parse(self, s):
        m = _GAUSS_RE.match(s.strip())
        if not m:
            raise ValueError(f"not a gaussian rational: {s!r}")
        re_part = Fraction(m.group(1))
        im_part = Fraction(m.group(2)) if m.group(2) else Fraction(0)
        return (re_part, im_part)

    def descriptor(self):
        return "Q[i]"


def _strip_factors(n: int, factors: tuple[int, ...]) -> int:
    n = abs(n)
    if n == 0:
        return 0
    changed = True
    while changed and n > 1:
        changed = False
        for f in factors:
            g = math.gcd(n, f)
            while g > 1:
                n //= g
                changed = True
                g = math.gcd(n, f)
    return n


@dataclass(frozen=True)
class Integers(Ring):
    """Z, optionally with finitely many declared elements made invertible.

    Payloads are Fractions whose denominator divides a product of powers
    of the inverted elements, so Integers((3,)) is Z[1/3].
    """

    inverted: tuple[int, ...] = ()

    def __post_init__(self):
        for n in self.inverted:
            if n in (0, 1, -1):
                raise ValueError(f"cannot invert {n}")

    def zero(self):
        return Fraction(0)

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, fr):
        fr = Fraction(fr)
        if _strip_factors(fr.denominator, self.inverted) != 1:
            raise UnrepresentableError(
                f"{fr} does not lie in {self.descriptor()}"
            )
        return fr

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def invert(self, a):
        if a == 0:
            raise NotAUnitError("0 is not invertible")
        if _strip_factors(a.numerator, self.inverted) != 1:
            raise NotAUnitError(f"{a} is not a unit in {self.descriptor()}")
        return 1 / a

    def has_rational_scalars(self):
        return False

    def text(self, a):
        return str(a)

    def parse(self, s):
        return self.from_fraction(_parse_fraction(s))

    def descriptor(self):
        if not self.inverted:
            return "Z"
        inner = ",".join(f"1/{n}" for n in self.inverted)
        return f"Z[{inner}]"


@dataclass(frozen=True)
class IntegersMod(Ring):
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")

    def zero(self):
        return 0

    def from_int(self, n):
        return n % self.modulus

    def from_fraction(self, fr):
        fr = Fraction(fr)
        return (fr.numerator * pow(fr.denominator, -1, self.modulus)) % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def invert(self, a):
        if math.gcd(a, self.modulus) != 1:
            raise NotAUnitError(f"{a} is not a unit mod {self.modulus}")
        return pow(a, -1, self.modulus)

    def has_rational_scalars(self):
        return False

    def text(self, a):
        return str(a)

    def parse(self, s):
        return int(s.strip()) % self.modulus

    def descriptor(self):
        return f"Z/{self.modulus}"


class _SeriesLike(Ring):
    """Shared machinery for the three one-parameter dict-payload kinds."""

    base: Ring
    param: str

    def _lo(self) -> Optional[int]:
        raise NotImplementedError

    def _hi(self) -> Optional[int]:
        raise NotImplementedError

    def zero(self):
        return {}

    def from_int(self, n):
        c = self.base.from_int(n)
        return {0: c} if not self.base.is_zero(c) else {}

    def from_fraction(self, fr):
        c = self.base.from_fraction(fr)
        return {0: c} if not self.base.is_zero(c) else {}

    def from_base(self, c: Payload) -> Payload:
        return {0: c} if not self.base.is_zero(c) else {}

    def param_payload(self, power: int = 1) -> Payload:
        self._check_exponent(power)
        return {power: self.base.one()}

    def param_el(self, power: int = 1) -> "RingElement":
        return self.wrap(self.param_payload(power))

    def _check_exponent(self, e: int) -> bool:
        """True when e is storable, False when it truncates away."""
        lo = self._lo()
        hi = self._hi()
        if lo is not None and e < lo:
            raise TailOverflowError(
                f"exponent {e} of {self.param} falls below the declared window"
            )
        return hi is None or e <= hi

    def add(self, a, b):
        out = dict(a)
        for e, c in b.items():
            s = self.base.add(out.get(e, self.base.zero()), c)
            if self.base.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return out

    def neg(self, a):
        return {e: self.base.neg(c) for e, c in a.items()}

    def mul(self, a, b):
        out: dict[int, Payload] = {}
        if len(a) > len(b):
            a, b = b, a
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                if not self._check_exponent(e):
                    continue
                p = self.base.mul(c1, c2)
                s = self.base.add(out.get(e, self.base.zero()), p)
                if self.base.is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return out

    def scalar_mul(self, c: Payload, a: Payload) -> Payload:
        out = {}
        for e, v in a.items():
            p = self.base.mul(c, v)
            if not self.base.is_zero(p):
                out[e] = p
        return out

    def valuation(self, a: Payload) -> Optional[int]:
        return min(a) if a else None

    def coefficient(self, a: Payload, e: int) -> Payload:
        return a.get(e, self.base.zero())

    def has_rational_scalars(self):
        return self.base.has_rational_scalars()

    def normalize(self, data):
        out = {}
        for e, c in data.items():
            c = self.base.normalize(c)
            if not self.base.is_zero(c):
                if self._check_exponent(e):
                    out[e] = c
        return out

    def text(self, a):
        if not a:
            return "[]"
        entries = [f"{e}:{self.base.text(c)}" for e, c in sorted(a.items())]
        return "[" + ",".join(entries) + "]"

    def parse(self, s):
        s = s.strip()
        if not (s.startswith("[") and s.endswith("]")):
            raise ValueError(f"not a series literal: {s!r}")
        inner = s[1:-1].strip()
        out = {}
        if not inner:
            return out
        for entry in _split_top(inner):
            e_text, c_text = _split_exponent_entry(entry)
            e = int(e_text)
            c = self.base.parse(c_text)
            if not self.base.is_zero(c):
                if self._check_exponent(e):
                    out[e] = c
        return out


@dataclass(frozen=True)
class PowerSeries(_SeriesLike):
    """base[[param]] truncated at the given order (inclusive)."""

    base: Ring
    param: str
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be nonnegative")

    def _lo(self):
        return 0

    def _hi(self):
        return self.order

    def invert(self, a):
        c0 = a.get(0)
        if c0 is None:
            raise NotAUnitError(f"no constant term, not a unit in {self.descriptor()}")
        b = {0: self.base.invert(c0)}
        prec = 1
        two = self.from_int(2)
        while prec <= self.order:
            prec = min(2 * prec, self.order + 1)
            correction = self.sub(two, self.mul(a, b))
            b = self.mul(b, correction)
        return b

    def descriptor(self):
        return f"powser({self.base.descriptor()};{self.param};{self.order})"


@dataclass(frozen=True)
class LaurentSeries(_SeriesLike):
    """Truncated Laurent window: exponents in [-tail, order].

    The bottom of the window is a hard contract (TailOverflowError), the
    top is plain truncation.  Inverting an element of valuation v returns
    coefficients that are only trustworthy up to order - 2v when v > 0;
    allocate headroom accordingly.
    """

    base: Ring
    param: str
    order: int
    tail: int

    def __post_init__(self):
        if self.tail < 0:
            raise ValueError("tail must be nonnegative")

    def _lo(self):
        return -self.tail

    def _hi(self):
        return self.order

    def invert(self, a):
        if not a:
            raise NotAUnitError("0 is not invertible")
        v = min(a)
        shifted = {e - v: c for e, c in a.items()}
        known = self.order - v
        helper = PowerSeries(self.base, self.param, max(known, 0))
        inv_shifted = helper.invert(shifted)
        out = {}
        for e, c in inv_shifted.items():
            e2 = e - v
            if self._check_exponent(e2):
                out[e2] = c
        return out

    def descriptor(self):
        return (
            f"laurent({self.base.descriptor()};{self.param};"
            f"{self.order};{self.tail})"
        )


@dataclass(frozen=True)
class LaurentPolynomials(_SeriesLike):
    """base[param, param^-1], exact: no truncation in either direction."""

    base: Ring
    param: str

    def _lo(self):
        return None

    def _hi(self):
        return None

    def invert(self, a):
        if len(a) != 1:
            raise NotAUnitError(
                f"only monomials are units in {self.descriptor()}"
            )
        ((e, c),) = a.items()
        return {-e: self.base.invert(c)}

    def substitute_param_power(self, a: Payload, k: int) -> Payload:
        """param -> param^k, an injective ring map for k != 0."""
        if k == 0:
            raise ValueError("degenerate substitution")
        return {e * k: c for e, c in a.items()}

    def eval_at_one(self, a: Payload) -> Payload:
        """Sum of coefficients, the ring map param -> 1."""
        return self.base.sum(a.values())

    def descriptor(self):
        return f"laurpoly({self.base.descriptor()};{self.param})"


Relation = Optional[tuple[int, tuple[tuple[tuple[int, ...], Payload], ...]]]

_REDUCTION_CAP = 100_000


@dataclass(frozen=True)
class QuotientRing(Ring):
    """base[g_1, ..., g_r] / (g_i^{d_i} - P_i) with rewrite reduction.

    relations[i] is None for a free generator or (d_i, P_i) where P_i is
    the replacement for g_i^{d_i}, stored as a sorted tuple of
    (exponent tuple, base payload) pairs.  Every payload is kept in
    normal form: no exponent reaches its cap.
    """

    base: Ring
    gens: tuple[str, ...]
    relations: tuple[Relation, ...]

    def __post_init__(self):
        if len(self.gens) != len(self.relations):
            raise ValueError("one relation slot per generator required")
        if len(set(self.gens)) != len(self.gens):
            raise ValueError("generator names must be distinct")

    def zero(self):
        return {}

    def _zero_exps(self):
        return (0,) * len(self.gens)

    def from_int(self, n):
        c = self.base.from_int(n)
        return {self._zero_exps(): c} if not self.base.is_zero(c) else {}

    def from_fraction(self, fr):
        c = self.base.from_fraction(fr)
        return {self._zero_exps(): c} if not self.base.is_zero(c) else {}

    def from_base(self, c):
        return {self._zero_exps(): c} if not self.base.is_zero(c) else {}

    def gen_payload(self, name: str, power: int = 1) -> Payload:
        i = self.gens.index(name)
        exps = [0] * len(self.gens)
        exps[i] = power
        return self._reduce({tuple(exps): self.base.one()})

    def gen_el(self, name: str, power: int = 1) -> "RingElement":
        return self.wrap(self.gen_payload(name, power))

    def _reduce(self, data: dict) -> dict:
        out: dict[tuple[int, ...], Payload] = {}
        work = list(data.items())
        steps = 0
        while work:
            steps += 1
            if steps > _REDUCTION_CAP:
                raise RuntimeError("rewrite system did not terminate")
            exps, coeff = work.pop()
            if self.base.is_zero(coeff):
                continue
            for i, rel in enumerate(self.relations):
                if rel is not None and exps[i] >= rel[0]:
                    cap, repl = rel
                    rest = list(exps)
                    rest[i] -= cap
                    for r_exps, r_coeff in repl:
                        new_exps = tuple(
                            rest[j] + r_exps[j] for j in range(len(self.gens))
                        )
                        work.append((new_exps, self.base.mul(coeff, r_coeff)))
                    break
            else:
                s = self.base.add(out.get(exps, self.base.zero()), coeff)
                if self.base.is_zero(s):
                    out.pop(exps, None)
                else:
                    out[exps] = s
        return out

    def add(self, a, b):
        out = dict(a)
        for exps, c in b.items():
            s = self.base.add(out.get(exps, self.base.zero()), c)
            if self.base.is_zero(s):
                out.pop(exps, None)
            else:
                out[exps] = s
        return out

    def neg(self, a):
        return {exps: self.base.neg(c) for exps, c in a.items()}

    def mul(self, a, b):
        raw: dict[tuple[int, ...], Payload] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                exps = tuple(x + y for x, y in zip(e1, e2))
                p = self.base.mul(c1, c2)
                s = self.base.add(raw.get(exps, self.base.zero()), p)
                if self.base.is_zero(s):
                    raw.pop(exps, None)
                else:
                    raw[exps] = s
        return self._reduce(raw)

    def constant_part(self, a) -> Payload:
        return a.get(self._zero_exps(), self.base.zero())

    def invert(self, a):
        zero_exps = self._zero_exps()
        const = a.get(zero_exps, self.base.zero())
        rest = {e: c for e, c in a.items() if e != zero_exps}
        if not rest:
            return self.from_base(self.base.invert(const))
        if not self.base.is_zero(const) and self.base.is_unit(const):
            inv_const = self.from_base(self.base.invert(const))
            # geometric series on the non-constant part when it is nilpotent
            s = self.neg(self.mul(inv_const, rest))
            acc = self.one()
            power = self.one()
            for _ in range(256):
                power = self.mul(power, s)
                if not power:
                    return self.mul(inv_const, acc)
                acc = self.add(acc, power)
        return self._invert_by_linear_solve(a)

    def _monomial_basis(self) -> Optional[list[tuple[int, ...]]]:
        caps = []
        for rel in self.relations:
            if rel is None:
                return None
            caps.append(rel[0])
        basis = [()]
        for cap in caps:
            basis = [e + (k,) for e in basis for k in range(cap)]
        if len(basis) > 4096:
            return None
        return basis

    def _invert_by_linear_solve(self, a):
        """Solve a*x = 1 in the finite monomial basis.

        Gaussian elimination restricted to unit pivots, which is exact
        over a field base and conservative otherwise.
        """
        basis = self._monomial_basis()
        if basis is None:
            raise NotAUnitError("element is not invertible")
        index = {e: i for i, e in enumerate(basis)}
        n = len(basis)
        rows = []
        for e in basis:
            col = self.mul(a, {e: self.base.one()})
            vec = [self.base.zero()] * n
            for exps, c in col.items():
                vec[index[exps]] = c
            rows.append(vec)
        # columns of the multiplication matrix are rows[] transposed
        mat = [[rows[j][i] for j in range(n)] for i in range(n)]
        rhs = [self.base.zero()] * n
        rhs[index[self._zero_exps()]] = self.base.one()

        perm = list(range(n))
        for col in range(n):
            pivot_row = None
            for r in range(col, n):
                if self.base.is_unit(mat[r][col]):
                    pivot_row = r
                    break
            if pivot_row is None:
                raise NotAUnitError("element is not invertible")
            mat[col], mat[pivot_row] = mat[pivot_row], mat[col]
            rhs[col], rhs[pivot_row] = rhs[pivot_row], rhs[col]
            inv_p = self.base.invert(mat[col][col])
            mat[col] = [self.base.mul(inv_p, v) for v in mat[col]]
            rhs[col] = self.base.mul(inv_p, rhs[col])
            for r in range(n):
                if r != col and not self.base.is_zero(mat[r][col]):
                    factor = mat[r][col]
                    mat[r] = [
                        self.base.sub(mat[r][k], self.base.mul(factor, mat[col][k]))
                        for k in range(n)
                    ]
                    rhs[r] = self.base.sub(rhs[r], self.base.mul(factor, rhs[col]))
        del perm
        out = {}
        for i, e in enumerate(basis):
            if not self.base.is_zero(rhs[i]):
                out[e] = rhs[i]
        return out

    def has_rational_scalars(self):
        return self.base.has_rational_scalars()

    def normalize(self, data):
        cleaned = {}
        for exps, c in data.items():
            c = self.base.normalize(c)
            if not self.base.is_zero(c):
                cleaned[tuple(exps)] = c
        return self._reduce(cleaned)

    def text(self, a):
        if not a:
            return "{}"
        entries = []
        for exps, c in sorted(a.items()):
            e_text = "(" + ",".join(str(e) for e in exps) + ")"
            entries.append(f"{e_text}:{self.base.text(c)}")
        return "{" + ",".join(entries) + "}"

    def parse(self, s):
        s = s.strip()
        if not (s.startswith("{") and s.endswith("}")):
            raise ValueError(f"not a quotient ring literal: {s!r}")
        inner = s[1:-1].strip()
        if not inner:
            return {}
        data = {}
        for entry in _split_top(inner):
            e_text, c_text = _split_exponent_entry(entry)
            e_text = e_text.strip()
            if not (e_text.startswith("(") and e_text.endswith(")")):
                raise ValueError(f"bad exponent tuple {e_text!r}")
            exps = tuple(
                int(p) for p in e_text[1:-1].split(",") if p.strip() != ""
            )
            if len(exps) != len(self.gens):
                raise ValueError("exponent tuple has wrong length")
            data[exps] = self.base.parse(c_text)
        return self.normalize(data)

    def descriptor(self):
        rels = []
        for g, rel in zip(self.gens, self.relations):
            if rel is None:
                rels.append(f"{g}:free")
            else:
                cap, repl = rel
                poly = self.text(dict(repl))
                rels.append(f"{g}^{cap}={poly}")
        return (
            f"polyquot({self.base.descriptor()};gens:{','.join(self.gens)};"
            f"rels:{';'.join(rels)})"
        )


class RingElement:
    """Thin wrapper pairing a payload with its ring.

    Arithmetic delegates to the ring and enforces that both operands
    live over the same ring.  Integers coerce implicitly.
    """

    __slots__ = ("ring", "data")

    def __init__(self, ring: Ring, data: Payload):
        self.ring = ring
        self.data = data

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingMismatchError(
                    f"{other.ring.descriptor()} vs {self.ring.descriptor()}"
                )
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return RingElement(self.ring, self.ring.from_int(other))
        if isinstance(other, Fraction):
            return RingElement(self.ring, self.ring.from_fraction(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RingElement(self.ring, self.ring.add(self.data, other.data))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RingElement(self.ring, self.ring.sub(self.data, other.data))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RingElement(self.ring, self.ring.sub(other.data, self.data))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RingElement(self.ring, self.ring.mul(self.data, other.data))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.data))

    def __pow__(self, n: int):
        return RingElement(self.ring, self.ring.pow(self.data, n))

    def inverse(self) -> "RingElement":
        return RingElement(self.ring, self.ring.invert(self.data))

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.data)

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.data)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.ring.eq(self.data, other.data)

    def __hash__(self):
        raise TypeError("ring elements are not hashable")

    def __str__(self):
        return self.ring.text(self.data)

    def __repr__(self):
        return f"<{self.ring.descriptor()}| {self.ring.text(self.data)}>"


def quotient_ring(
    base: Ring,
    gens: Iterable[str],
    relations: dict[str, Optional[tuple[int, dict]]],
) -> QuotientRing:
    """Friendly constructor for polynomial quotient test rings.

    relations maps generator name to None (free) or (cap, replacement)
    where replacement maps exponent tuples to int / Fraction / base
    payload coefficients.
    """
    gens = tuple(gens)
    rel_list: list[Relation] = []
    for g in gens:
        rel = relations.get(g)
        if rel is None:
            rel_list.append(None)
            continue
        cap, repl = rel
        entries = []
        for exps, coeff in repl.items():
            if isinstance(coeff, bool):
                raise TypeError("bool coefficient")
            if isinstance(coeff, int):
                coeff = base.from_int(coeff)
            elif isinstance(coeff, Fraction):
                coeff = base.from_fraction(coeff)
            if not base.is_zero(coeff):
                entries.append((tuple(exps), coeff))
        rel_list.append((cap, tuple(sorted(entries))))
    return QuotientRing(base, gens, tuple(rel_list))


_SERIES_HEAD_RE = re.compile(r"^(powser|laurent|laurpoly)\((.*)\)$")


def parse_ring(s: str) -> Ring:
    """Parse the descriptor grammar produced by Ring.descriptor.

    Quotient rings are built programmatically, not parsed, so polyquot
    descriptors are rejected here.
    """
    s = s.strip()
    if s == "Q":
        return Rationals()
    if s == "Q[i]":
        return GaussianRationals()
    if s == "Z":
        return Integers()
    if s.startswith("Z[") and s.endswith("]"):
        inner = s[2:-1]
        inverted = []
        for part in inner.split(","):
            part = part.strip()
            if not part.startswith("1/"):
                raise ValueError(f"bad localized integers descriptor {s!r}")
            inverted.append(int(part[2:]))
        return Integers(tuple(inverted))
    if s.startswith("Z/"):
        return IntegersMod(int(s[2:]))
    m = _SERIES_HEAD_RE.match(s)
    if m:
        kind, inner = m.group(1), m.group(2)
        parts = _split_top(inner, ";")
        base = parse_ring(parts[0])
        if kind == "powser":
            if len(parts) != 3:
                raise ValueError(f"bad power series descriptor {s!r}")
            return PowerSeries(base, parts[1].strip(), int(parts[2]))
        if kind == "laurent":
            if len(parts) != 4:
                raise ValueError(f"bad laurent descriptor {s!r}")
            return LaurentSeries(
                base, parts[1].strip(), int(parts[2]), int(parts[3])
            )
        if len(parts) != 2:
            raise ValueError(f"bad laurent polynomial descriptor {s!r}")
        return LaurentPolynomials(base, parts[1].strip())
    raise ValueError(f"unknown ring descriptor {s!r}")


QQ = Rationals()
ZZ = Integers()
QI = GaussianRationals()
