"""Dense truncated series and the error-order algebra.

A series stores the exponent of its first nonzero term (``alpha``), the
implicit exponent step (``inc``), the coefficients on that grid and an
``OrderTerm``.  Every public constructor normalizes: no leading or trailing
zero coefficients, ``inc`` the gcd of the gaps between nonzero terms, and a
single canonical zero (alpha 0, inc 0, no coefficients).

Theta terms carry an optional set of tags.  A tag names one unknown
truncation remainder; two Theta errors of the same exponent whose tag sets
are nonempty and disjoint are treated as independent, so their sum keeps
Theta instead of collapsing to O.  Untagged Theta terms follow the plain
rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import FrozenSet, Tuple

from . import coeff as C

INF = math.inf

LITTLE_O = "o"
BIG_O = "O"
THETA = "Theta"
EXACT = "exact"
_KINDS = (LITTLE_O, BIG_O, THETA, EXACT)


def _frac(x) -> Fraction:
    return x if type(x) is Fraction else Fraction(x)


def frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    """gcd of two nonnegative rationals: gcd(numerators) / lcm(denominators)."""
    if not a:
        return abs(Fraction(b))
    if not b:
        return abs(Fraction(a))
    a, b = _frac(a), _frac(b)
    return Fraction(math.gcd(a.numerator, b.numerator), math.lcm(a.denominator, b.denominator))


@dataclass(frozen=True)
class OrderTerm:
    kind: str
    nu: object = INF
    tags: FrozenSet = field(default_factory=frozenset, compare=True)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown order kind {self.kind!r}")
        infinite = type(self.nu) is float and self.nu == INF
        if (self.kind == EXACT) != infinite:
            raise ValueError("exact order terms and only they have infinite exponent")
        if not infinite and type(self.nu) is not Fraction:
            object.__setattr__(self, "nu", Fraction(self.nu))
        if self.kind != THETA and self.tags:
            object.__setattr__(self, "tags", frozenset())

    @property
    def is_exact(self) -> bool:
        return self.kind == EXACT

    def allows(self, exponent) -> bool:
        """Whether a stored term of this exponent is compatible with the order."""
        if self.kind == EXACT:
            return True
        if self.kind == LITTLE_O:
            return exponent <= self.nu
        return exponent < self.nu

    def bound(self):
        """Every stored exponent must be <= this (little-o) or < this (others)."""
        return self.nu

    def shift(self, beta) -> "OrderTerm":
        """The error multiplied by a series of exact dominant exponent beta."""
        if self.kind == EXACT:
            return self
        return OrderTerm(self.kind, self.nu + Fraction(beta), self.tags)

    def weaken_theta(self) -> "OrderTerm":
        return OrderTerm(BIG_O, self.nu) if self.kind == THETA else self

    def __repr__(self):
        if self.kind == EXACT:
            return "Theta(z^inf)"
        return f"{self.kind}(z^{self.nu})"


EXACT_ORDER = OrderTerm(EXACT)


def little_o(nu) -> OrderTerm:
    return OrderTerm(LITTLE_O, Fraction(nu))


def big_o(nu) -> OrderTerm:
    return OrderTerm(BIG_O, Fraction(nu))


def theta(nu, tags=()) -> OrderTerm:
    if nu == INF:
        return EXACT_ORDER
    return OrderTerm(THETA, Fraction(nu), frozenset(tags))


def combine_orders(a: OrderTerm, b: OrderTerm) -> OrderTerm:
    """Order of the sum of two errors."""
    if a.kind == EXACT:
        return b
    if b.kind == EXACT:
        return a
    if a.nu != b.nu:
        return a if a.nu < b.nu else b
    kinds = {a.kind, b.kind}
    if kinds == {THETA}:
        if a.tags and b.tags and not (a.tags & b.tags):
            return OrderTerm(THETA, a.nu, a.tags | b.tags)
        return OrderTerm(BIG_O, a.nu)
    if BIG_O in kinds:
        return OrderTerm(BIG_O, a.nu)
    if THETA in kinds:
        return a if a.kind == THETA else b
    return a


def multiply_orders(a: OrderTerm, b: OrderTerm) -> OrderTerm:
    """Order of the product of two errors."""
    if a.kind == EXACT or b.kind == EXACT:
        return EXACT_ORDER
    nu = a.nu + b.nu
    kinds = {a.kind, b.kind}
    if LITTLE_O in kinds:
        return OrderTerm(LITTLE_O, nu)
    if BIG_O in kinds:
        return OrderTerm(BIG_O, nu)
    return OrderTerm(THETA, nu, a.tags | b.tags)


def absorb_term(order: OrderTerm, exponent) -> Tuple[bool, OrderTerm]:
    """Fate of a known nonzero term against an order: (kept, new order)."""
    # A Theta error is an unknown generic quantity, so a known term of the
    # same exponent does not cancel it.
    return order.allows(exponent), order


# series

class SeriesRep:
    """Truncated generalized Puiseux series sum c_j z^(alpha + j*inc) + order."""

    __slots__ = ("alpha", "inc", "coeffs", "order")

    def __init__(self, alpha, inc, coeffs, order=EXACT_ORDER):
        self.alpha = _frac(alpha)
        self.inc = _frac(inc)
        self.coeffs = tuple(coeffs)
        self.order = order

    # construction

    @classmethod
    def from_terms(cls, terms, order: OrderTerm = EXACT_ORDER) -> "SeriesRep":
        """Normalized series from (exponent, coefficient) pairs or a dict."""
        if isinstance(terms, dict):
            terms = terms.items()
        collected = {}
        for e, c in terms:
            c = C.coerce(c)
            if not c:
                continue
            e = _frac(e)
            if e in collected:
                collected[e] = collected[e] + c
            else:
                collected[e] = c
        kept = []
        for e in sorted(collected):
            c = collected[e]
            if not c:
                continue
            keep, order = absorb_term(order, e)
            if keep:
                kept.append((e, c))
        if not kept:
            return cls(0, 0, (), order)
        alpha = kept[0][0]
        if len(kept) == 1:
            return cls(alpha, 0, (kept[0][1],), order)
        # regrid on integers: offsets over a common denominator
        den = 1
        for e, _ in kept:
            den = math.lcm(den, e.denominator)
        offsets = [int((e - alpha) * den) for e, _ in kept]
        g = 0
        for n in offsets:
            g = math.gcd(g, n)
        coeffs = [C.ZERO] * (offsets[-1] // g + 1)
        for n, (_, c) in zip(offsets, kept):
            coeffs[n // g] = c
        return cls(alpha, Fraction(g, den), coeffs, order)

    @classmethod
    def from_dense(cls, base, step, coeffs, order: OrderTerm = EXACT_ORDER, scale=None) -> "SeriesRep":
        """Series sum coeffs[n] * z^(base + n*step), each scaled by scale, trimmed to order."""
        base, step = _frac(base), _frac(step)
        idx = [n for n, c in enumerate(coeffs) if c]
        if order.kind != EXACT:
            idx = [n for n in idx if order.allows(base + n * step)]
        if not idx:
            return cls(0, 0, (), order)
        first = idx[0]
        alpha = base + first * step
        g = 0
        for n in idx:
            g = math.gcd(g, n - first)
        picked = [coeffs[n] if scale is None else coeffs[n] * scale for n in idx]
        if not g:
            return cls(alpha, 0, (picked[0],), order)
        out = [C.ZERO] * ((idx[-1] - first) // g + 1)
        for n, c in zip(idx, picked):
            out[(n - first) // g] = c
        return cls(alpha, step * g, out, order)

    @classmethod
    def zero(cls, order: OrderTerm = EXACT_ORDER) -> "SeriesRep":
        return cls(0, 0, (), order)

    @classmethod
    def monomial(cls, c, exponent, order: OrderTerm = EXACT_ORDER) -> "SeriesRep":
        return cls.from_terms([(exponent, c)], order)

    @classmethod
    def constant(cls, c) -> "SeriesRep":
        return cls.from_terms([(0, c)])

    # views

    def terms(self):
        """Nonzero (exponent, coefficient) pairs in ascending exponent order."""
        out = []
        for j, c in enumerate(self.coeffs):
            if c:
                out.append((self.alpha + j * self.inc, c))
        return out

    def term_dict(self):
        return dict(self.terms())

    def coefficient(self, exponent) -> C.Coefficient:
        exponent = Fraction(exponent)
        if not self.coeffs:
            return C.ZERO
        if not self.inc:
            return self.coeffs[0] if exponent == self.alpha else C.ZERO
        j = (exponent - self.alpha) / self.inc
        if j.denominator != 1 or not 0 <= j < len(self.coeffs):
            return C.ZERO
        return self.coeffs[int(j)]

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_exact(self) -> bool:
        return self.order.kind == EXACT

    def with_order(self, order: OrderTerm) -> "SeriesRep":
        return SeriesRep.from_terms(self.terms(), order)

    def __eq__(self, other):
        if not isinstance(other, SeriesRep):
            return NotImplemented
        return (self.alpha == other.alpha and self.inc == other.inc
                and self.order == other.order and len(self.coeffs) == len(other.coeffs)
                and all(C.coeff_equals(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def same_terms(self, other) -> bool:
        a, b = self.terms(), other.terms()
        return len(a) == len(b) and all(
            ea == eb and C.coeff_equals(ca, cb) for (ea, ca), (eb, cb) in zip(a, b))

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"({c!r})*z^{e}" for e, c in self.terms()) or "0"
        return f"SeriesRep({body} + {self.order!r})"


def normalize(s: SeriesRep) -> SeriesRep:
    return SeriesRep.from_terms(s.terms(), s.order)


def is_normalized(s: SeriesRep) -> bool:
    if not s.coeffs:
        return s.alpha == 0 and s.inc == 0
    if not s.coeffs[0] or not s.coeffs[-1]:
        return False
    exps = [e for e, _ in s.terms()]
    g = reduce(frac_gcd, (e - exps[0] for e in exps[1:]), Fraction(0))
    if g != s.inc or (len(s.coeffs) == 1 and s.inc != 0):
        return False
    return all(s.order.allows(e) for e in exps)


def align(u: SeriesRep, v: SeriesRep):
    """Copies of u and v laid out on one common exponent grid (not normalized)."""
    if u.is_zero() and v.is_zero():
        return u, v
    if u.is_zero():
        return SeriesRep(v.alpha, v.inc, (), u.order), v
    if v.is_zero():
        return u, SeriesRep(u.alpha, u.inc, (), v.order)
    g = frac_gcd(frac_gcd(u.inc, v.inc), abs(u.alpha - v.alpha))
    if g == u.inc == v.inc:
        return u, v
    return _regrid(u, g), _regrid(v, g)


def _regrid(s: SeriesRep, g: Fraction) -> SeriesRep:
    if not g:
        return s
    if s.inc == g:
        return s
    step = int(s.inc / g) if s.inc else 0
    n = (len(s.coeffs) - 1) * step + 1
    coeffs = [C.ZERO] * n
    for j, c in enumerate(s.coeffs):
        coeffs[j * step] = c
    return SeriesRep(s.alpha, g, coeffs, s.order)


def _truncation_tag(dropped, order):
    key = tuple((e, c.sort_key()) for e, c in dropped) + (order.kind, str(order.nu))
    return hash(key)


def truncate(s: SeriesRep, k) -> SeriesRep:
    """Drop terms above k; a dropped known term becomes a Theta error."""
    k = Fraction(k)
    terms = s.terms()
    kept = [(e, c) for e, c in terms if e <= k]
    dropped = [(e, c) for e, c in terms if e > k]
    if dropped:
        order = combine_orders(theta(dropped[0][0], (_truncation_tag(dropped, s.order),)),
                               s.order)
        return SeriesRep.from_terms(kept, order)
    if kept or s.order.kind == EXACT:
        return s
    return SeriesRep.from_terms((), combine_orders(little_o(k), s.order))


def weaken_to(s: SeriesRep, k) -> SeriesRep:
    """Truncate at k and report o(z^k) unless the series is exact."""
    t = truncate(s, k)
    if t.order.kind == EXACT:
        return t
    if t.order.nu > k or (t.order.nu == k and t.order.kind == LITTLE_O):
        return SeriesRep.from_terms(t.terms(), little_o(k))
    return t


# accessors

def dominant_exponent(s: SeriesRep):
    return s.alpha if s.coeffs else INF


def dominant_term(s: SeriesRep):
    if not s.coeffs:
        raise ValueError("the zero series has no dominant term")
    return s.coeffs[0], s.alpha


def degree(s: SeriesRep):
    if not s.coeffs:
        return -INF
    return s.alpha + (len(s.coeffs) - 1) * s.inc


def correct_to(s: SeriesRep, k) -> bool:
    """True when s determines every term of exponent <= k."""
    o = s.order
    if o.kind == EXACT:
        return True
    return k <= o.nu if o.kind == LITTLE_O else k < o.nu
