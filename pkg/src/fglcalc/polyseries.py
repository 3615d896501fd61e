"""Truncated multivariate power series over an exact coefficient ring.

A MultiSeries is a sparse polynomial representative of a series modulo
total degree > trunc.  The context (ring, vars, trunc) is part of the
type: binary operations insist on identical contexts, and explicit
conversions (lift_to, with_trunc, rename_vars) move between them.
Because truncation by total degree is a ring quotient, arithmetic here
is exact on the quotient with no window caveats.

Substitution is the one place the truncation contract can be violated
silently, so it is guarded: substituted series must have zero constant
term unless the caller asserts that the polynomial is exact (mode
"exact") or takes responsibility for nilpotent constant parts (mode
"nilpotent", used by the group law machinery after sizing truncations).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Optional

from .coefficients import Payload, Ring, RingElement
from .errors import (
    ConstantTermError,
    NotAUnitError,
    RingMismatchError,
    TruncationError,
)

Exps = tuple[int, ...]


def _compositions(total: int, parts: int):
    """All tuples of nonnegative ints of given length summing to total."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


class MultiSeries:
    __slots__ = ("ring", "vars", "trunc", "terms")

    def __init__(
        self,
        ring: Ring,
        vars: tuple[str, ...],
        trunc: int,
        terms: Optional[Mapping[Exps, Payload]] = None,
        *,
        _canonical: bool = False,
    ):
        if trunc < 0:
            raise ValueError("trunc must be nonnegative")
        if len(set(vars)) != len(vars):
            raise ValueError("variable names must be distinct")
        self.ring = ring
        self.vars = tuple(vars)
        self.trunc = trunc
        if terms is None:
            self.terms = {}
        elif _canonical:
            self.terms = dict(terms)
        else:
            cleaned: dict[Exps, Payload] = {}
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != len(self.vars):
                    raise ValueError(f"exponent tuple {exps} has wrong arity")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                if sum(exps) > trunc:
                    continue
                c = ring.normalize(_to_payload(ring, c))
                if not ring.is_zero(c):
                    cleaned[exps] = c
            self.terms = cleaned

    # ------------------------------------------------------------------
    # context helpers

    def _same_context(self, other: "MultiSeries") -> None:
        if (
            self.ring != other.ring
            or self.vars != other.vars
            or self.trunc != other.trunc
        ):
            raise RingMismatchError(
                f"series contexts differ: ({self.ring.descriptor()}, {self.vars}, "
                f"{self.trunc}) vs ({other.ring.descriptor()}, {other.vars}, "
                f"{other.trunc})"
            )

    def _make(self, terms: dict) -> "MultiSeries":
        return MultiSeries(self.ring, self.vars, self.trunc, terms, _canonical=True)

    def zero(self) -> "MultiSeries":
        return self._make({})

    def one(self) -> "MultiSeries":
        return self.const(self.ring.one())

    def const(self, c) -> "MultiSeries":
        c = _to_payload(self.ring, c)
        if self.ring.is_zero(c):
            return self._make({})
        return self._make({(0,) * len(self.vars): c})

    def var(self, name: str) -> "MultiSeries":
        i = self.vars.index(name)
        exps = [0] * len(self.vars)
        exps[i] = 1
        if self.trunc < 1:
            return self._make({})
        return self._make({tuple(exps): self.ring.one()})

    # ------------------------------------------------------------------
    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Iterable[int]) -> RingElement:
        exps = tuple(exps)
        if len(exps) != len(self.vars):
            raise ValueError("exponent tuple has wrong arity")
        if sum(exps) > self.trunc:
            raise TruncationError(
                f"coefficient at {exps} lies beyond truncation {self.trunc}"
            )
        return self.ring.wrap(self.terms.get(exps, self.ring.zero()))

    def constant_term(self) -> RingElement:
        return self.ring.wrap(
            self.terms.get((0,) * len(self.vars), self.ring.zero())
        )

    def max_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def sorted_terms(self) -> list[tuple[Exps, Payload]]:
        return sorted(self.terms.items())

    # ------------------------------------------------------------------
    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._same_context(other)
        out = dict(self.terms)
        ring = self.ring
        for exps, c in other.terms.items():
            s = ring.add(out.get(exps, ring.zero()), c)
            if ring.is_zero(s):
                out.pop(exps, None)
            else:
                out[exps] = s
        return self._make(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        ring = self.ring
        return self._make({e: ring.neg(c) for e, c in self.terms.items()})

    def _coerce(self, other):
        if isinstance(other, MultiSeries):
            return other
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingMismatchError(
                    f"coefficient ring {other.ring.descriptor()} does not match "
                    f"{self.ring.descriptor()}"
                )
            return self.const(other.data)
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            return self.const(other)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, RingElement) or isinstance(other, (int, Fraction)):
            other = self._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        if not isinstance(other, MultiSeries):
            return NotImplemented
        self._same_context(other)
        ring = self.ring
        trunc = self.trunc
        t1, t2 = self.terms, other.terms
        if len(t1) > len(t2):
            t1, t2 = t2, t1
        deg2 = {e: sum(e) for e in t2}
        out: dict[Exps, Payload] = {}
        zero = ring.zero()
        for e1, c1 in t1.items():
            d1 = sum(e1)
            for e2, c2 in t2.items():
                if d1 + deg2[e2] > trunc:
                    continue
                e = tuple(x + y for x, y in zip(e1, e2))
                p = ring.mul(c1, c2)
                s = ring.add(out.get(e, zero), p)
                if ring.is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return self._make(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiSeries":
        if n < 0:
            return self.series_inverse() ** (-n)
        result = self.one()
        square = self
        while n:
            if n & 1:
                result = result * square
            n >>= 1
            if n:
                square = square * square
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.vars == other.vars
            and self.trunc == other.trunc
            and self.terms == other.terms
        )

    def __hash__(self):
        raise TypeError("series are not hashable")

    # ------------------------------------------------------------------
    # substitution and evaluation

    def substitute(
        self,
        bindings: Mapping[str, "MultiSeries"],
        mode: str = "strict",
    ) -> "MultiSeries":
        """Evaluate at series arguments.

        mode "strict": every substituted series must kill its constant
        term.  mode "exact": the caller asserts this polynomial is the
        whole series, making constant terms safe.  mode "nilpotent":
        constant terms must be nilpotent and the caller has sized the
        truncations so that dropped-tail contributions vanish in the
        coefficient ring.
        """
        if mode not in ("strict", "exact", "nilpotent"):
            raise ValueError(f"unknown substitution mode {mode!r}")
        for name in bindings:
            if name not in self.vars:
                raise ValueError(f"unknown variable {name!r}")
        if not bindings:
            raise ValueError("no bindings given")
        target = next(iter(bindings.values()))
        full: dict[str, MultiSeries] = {}
        for v in self.vars:
            if v in bindings:
                s = bindings[v]
                target._same_context(s)
                full[v] = s
            else:
                if v not in target.vars:
                    raise RingMismatchError(
                        f"variable {v!r} is unbound and absent from the target"
                    )
                full[v] = target.var(v)
        if target.ring != self.ring:
            raise RingMismatchError(
                f"substitution across coefficient rings "
                f"({self.ring.descriptor()} vs {target.ring.descriptor()})"
            )
        if mode != "exact":
            for v, s in full.items():
                c = s.constant_term()
                if c.is_zero():
                    continue
                if mode == "strict":
                    raise ConstantTermError(
                        f"substituted series for {v!r} has constant term {c}"
                    )
                if self.ring.nilpotency_order(c.data, self.trunc + 1) is None:
                    raise ConstantTermError(
                        f"constant term {c} of binding for {v!r} is not "
                        f"nilpotent within the truncation"
                    )

        # powers of each binding, grown on demand
        pows: dict[str, list[MultiSeries]] = {
            v: [target.one()] for v in self.vars
        }

        def power(v: str, e: int) -> MultiSeries:
            cache = pows[v]
            while len(cache) <= e:
                cache.append(cache[-1] * full[v])
            return cache[e]

        acc = target.zero()
        for exps, c in sorted(self.terms.items()):
            term = target.const(c)
            for v, e in zip(self.vars, exps):
                if e:
                    term = term * power(v, e)
            acc = acc + term
        return acc

    def eval_elements(
        self,
        values: Mapping[str, RingElement],
        mode: str = "strict",
    ) -> RingElement:
        """Evaluate at ring elements.

        In mode "strict" the joint nilpotency of the values must kill
        every monomial beyond the truncation; mode "exact" skips the
        check because the polynomial is the whole series.
        """
        if mode not in ("strict", "exact"):
            raise ValueError(f"unknown evaluation mode {mode!r}")
        ring = self.ring
        vals: list[Payload] = []
        for v in self.vars:
            if v not in values:
                raise ValueError(f"no value for variable {v!r}")
            elem = values[v]
            if isinstance(elem, RingElement):
                if elem.ring != ring:
                    raise RingMismatchError(
                        f"value for {v!r} lives in {elem.ring.descriptor()}"
                    )
                vals.append(elem.data)
            else:
                vals.append(ring.normalize(elem))

        pows: list[list[Payload]] = [[ring.one()] for _ in vals]

        def power(i: int, e: int) -> Payload:
            cache = pows[i]
            while len(cache) <= e:
                cache.append(ring.mul(cache[-1], vals[i]))
            return cache[e]

        if mode == "strict":
            k = self.trunc + 1
            count = 0
            for comp in _compositions(k, len(vals)):
                count += 1
                if count > 5000:
                    raise ConstantTermError(
                        "too many variables for the joint nilpotency check; "
                        "use an exact law or bind series instead"
                    )
                prod = ring.one()
                for i, e in enumerate(comp):
                    prod = ring.mul(prod, power(i, e))
                if not ring.is_zero(prod):
                    raise ConstantTermError(
                        "values are not jointly nilpotent within the "
                        "truncation; evaluation would be unsound"
                    )

        total = ring.zero()
        for exps, c in sorted(self.terms.items()):
            term = c
            for i, e in enumerate(exps):
                if e:
                    term = ring.mul(term, power(i, e))
            total = ring.add(total, term)
        return ring.wrap(total)

    # ------------------------------------------------------------------
    # calculus

    def derivative(self, var: str) -> "MultiSeries":
        i = self.vars.index(var)
        ring = self.ring
        out: dict[Exps, Payload] = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            new = ring.mul(c, ring.from_int(e))
            if ring.is_zero(new):
                continue
            new_exps = exps[:i] + (e - 1,) + exps[i + 1 :]
            out[new_exps] = ring.add(out.get(new_exps, ring.zero()), new)
        return self._make({e: c for e, c in out.items() if not ring.is_zero(c)})

    def integrate(self, var: str) -> "MultiSeries":
        """Termwise antiderivative with zero constant; needs Q-scalars."""
        i = self.vars.index(var)
        ring = self.ring
        out: dict[Exps, Payload] = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if sum(exps) + 1 > self.trunc:
                continue
            try:
                inv = ring.invert(ring.from_int(e + 1))
            except NotAUnitError as exc:
                raise NotAUnitError(
                    f"integration needs 1/{e + 1} in {ring.descriptor()}"
                ) from exc
            new = ring.mul(c, inv)
            if not ring.is_zero(new):
                out[exps[:i] + (e + 1,) + exps[i + 1 :]] = new
        return self._make(out)

    # ------------------------------------------------------------------
    # inversion and reversion

    def series_inverse(self) -> "MultiSeries":
        """Multiplicative inverse; the constant term must be a unit."""
        c0 = self.constant_term().data
        try:
            inv0 = self.ring.invert(c0)
        except NotAUnitError as exc:
            raise NotAUnitError(
                "series has non-unit constant term, cannot invert"
            ) from exc
        b = self.const(inv0)
        two = self.const(self.ring.from_int(2))
        steps = max(1, self.trunc).bit_length() + 1
        for _ in range(steps):
            prod = self * b
            if prod == self.one():
                break
            b = b * (two - prod)
        return b

    def reversion(self) -> "MultiSeries":
        """Compositional inverse of a univariate series with unit slope."""
        if len(self.vars) != 1:
            raise ValueError("reversion needs a univariate series")
        v = self.vars[0]
        if not self.constant_term().is_zero():
            raise ConstantTermError("reversion needs zero constant term")
        a1 = self.terms.get((1,), self.ring.zero())
        try:
            inv_a1 = self.ring.invert(a1)
        except NotAUnitError as exc:
            raise NotAUnitError("slope is not a unit, cannot revert") from exc
        x = self.var(v)
        g = x * self.ring.wrap(inv_a1)
        deriv = self.derivative(v)
        for _ in range(max(1, self.trunc).bit_length() + 2):
            err = self.substitute({v: g}) - x
            if err.is_zero():
                return g
            slope = deriv.substitute({v: g})
            g = g - err * slope.series_inverse()
        if not (self.substitute({v: g}) - x).is_zero():
            raise RuntimeError("reversion failed to converge")
        return g

    # ------------------------------------------------------------------
    # context conversions

    def with_trunc(self, trunc: int) -> "MultiSeries":
        """Change the truncation order.

        Lowering drops terms and is always sound.  Raising keeps the
        stored terms and asserts, on the caller's authority, that the
        series really has no terms in between.
        """
        if trunc == self.trunc:
            return self
        terms = {e: c for e, c in self.terms.items() if sum(e) <= trunc}
        return MultiSeries(self.ring, self.vars, trunc, terms, _canonical=True)

    def rename_vars(self, mapping: Mapping[str, str]) -> "MultiSeries":
        new_vars = tuple(mapping.get(v, v) for v in self.vars)
        return MultiSeries(self.ring, new_vars, self.trunc, self.terms, _canonical=True)

    def lift_to(self, new_vars: tuple[str, ...]) -> "MultiSeries":
        """Reinterpret over a superset of variables."""
        positions = []
        for v in self.vars:
            if v not in new_vars:
                raise ValueError(f"variable {v!r} missing from target")
            positions.append(new_vars.index(v))
        n = len(new_vars)
        out = {}
        for exps, c in self.terms.items():
            new_exps = [0] * n
            for pos, e in zip(positions, exps):
                new_exps[pos] = e
            out[tuple(new_exps)] = c
        return MultiSeries(self.ring, tuple(new_vars), self.trunc, out, _canonical=True)

    def project_vars(self, keep: tuple[str, ...]) -> "MultiSeries":
        """Drop variables that never occur; error if one is in use."""
        drop_idx = [i for i, v in enumerate(self.vars) if v not in keep]
        for exps in self.terms:
            for i in drop_idx:
                if exps[i]:
                    raise ValueError(
                        f"variable {self.vars[i]!r} occurs, cannot project away"
                    )
        keep_idx = [self.vars.index(v) for v in keep]
        out = {}
        for exps, c in self.terms.items():
            out[tuple(exps[i] for i in keep_idx)] = c
        return MultiSeries(self.ring, tuple(keep), self.trunc, out, _canonical=True)

    def coefficient_in(self, var: str, k: int) -> "MultiSeries":
        """Coefficient of var^k as a series with var's slot zeroed."""
        i = self.vars.index(var)
        out = {}
        for exps, c in self.terms.items():
            if exps[i] == k:
                out[exps[:i] + (0,) + exps[i + 1 :]] = c
        return self._make(out)

    def map_coefficients(self, func: Callable[[Payload], Payload], ring: Ring) -> "MultiSeries":
        out = {}
        for exps, c in self.terms.items():
            new = func(c)
            if not ring.is_zero(new):
                out[exps] = new
        return MultiSeries(ring, self.vars, self.trunc, out, _canonical=True)

    # ------------------------------------------------------------------
    # printing

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            ctext = self.ring.text(c)
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.vars, exps)
                if e
            )
            if not mono:
                piece = ctext
            elif ctext == "1":
                piece = mono
            elif ctext == "-1":
                piece = f"-{mono}"
            else:
                piece = f"{ctext}*{mono}"
            parts.append(piece)
        text = parts[0]
        for piece in parts[1:]:
            if piece.startswith("-"):
                text += " - " + piece[1:]
            else:
                text += " + " + piece
        return text

    def __repr__(self):
        return (
            f"<series {self.vars} trunc {self.trunc} over "
            f"{self.ring.descriptor()}: {self}>"
        )


def _to_payload(ring: Ring, c) -> Payload:
    if isinstance(c, RingElement):
        if c.ring != ring:
            raise RingMismatchError(
                f"coefficient lives in {c.ring.descriptor()}, "
                f"not {ring.descriptor()}"
            )
        return c.data
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return ring.from_int(c)
    if isinstance(c, Fraction):
        return ring.from_fraction(c)
    return c


def series(ring: Ring, vars: Iterable[str], trunc: int, terms=None) -> MultiSeries:
    """Public constructor normalizing arbitrary coefficient inputs."""
    return MultiSeries(ring, tuple(vars), trunc, terms or {})


def variable(ring: Ring, vars: Iterable[str], trunc: int, name: str) -> MultiSeries:
    return series(ring, vars, trunc).var(name)
