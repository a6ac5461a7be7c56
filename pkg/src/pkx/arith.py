"""Series ring operations and calculus with error-order bookkeeping.

Kernels that can produce infinitely many terms (division, non-integer or
negative powers) take a target ``k``: terms up to z^k are produced and the
rest is summarized as o(z^k).  Whatever the operands' own errors allow
is folded in through the order algebra, so a result may come back less
precise than requested; the controller detects that and asks the operands
for more.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import coeff as C
from . import powerseries as P
from .errors import DivisionByZeroSeries, InsufficientOrder, NonElementaryIntegral
from .series import (EXACT, EXACT_ORDER, INF, LITTLE_O, OrderTerm, SeriesRep,
                     combine_orders, frac_gcd, little_o, multiply_orders)


def _target(k):
    return INF if k is None else Fraction(k)


def term_count(limit, base, step) -> int:
    """Index of the last grid point base + n*step not exceeding limit (-1 if none)."""
    if limit == INF:
        raise ValueError("a finite target order is required for a nonterminating series")
    if limit < base:
        return -1
    return int(math.floor((Fraction(limit) - base) / step))


def relative_form(u: SeriesRep):
    """(c, alpha, w, g) with u = c z^alpha (1 + w(z^g)); w as a t-series list."""
    if u.is_zero():
        raise InsufficientOrder("the dominant term is not known", needed=None)
    c = u.coeffs[0]
    cinv = c.inverse()
    w = [C.ZERO] + [x * cinv for x in u.coeffs[1:]]
    return c, u.alpha, w, u.inc


def split_constant(u: SeriesRep):
    """(t0, w, g): u = t0 + w(z^g) with t0 the z^0 coefficient, w(0) = 0."""
    terms = [(e, c) for e, c in u.terms() if e > 0]
    t0 = u.coefficient(0)
    if not terms:
        return t0, [C.ZERO], Fraction(1)
    g = Fraction(0)
    for e, _ in terms:
        g = frac_gcd(g, e)
    w = [C.ZERO] * (int(terms[-1][0] / g) + 1)
    for e, c in terms:
        w[int(e / g)] = c
    return t0, w, g


def from_t_series(coeffs, base, step, order, scale=C.ONE) -> SeriesRep:
    return SeriesRep.from_dense(base, step, coeffs, order, None if scale == C.ONE else scale)


def is_zero_ps(w) -> bool:
    return not any(w)


# ring operations

def srs_neg(u: SeriesRep) -> SeriesRep:
    return SeriesRep(u.alpha, u.inc, tuple(-c for c in u.coeffs), u.order)


def srs_add(u: SeriesRep, v: SeriesRep) -> SeriesRep:
    return SeriesRep.from_terms(u.terms() + v.terms(), combine_orders(u.order, v.order))


def srs_sub(u: SeriesRep, v: SeriesRep) -> SeriesRep:
    return srs_add(u, srs_neg(v))


def srs_scale(u: SeriesRep, c) -> SeriesRep:
    c = C.coerce(c)
    if not c:
        return SeriesRep.zero()
    return SeriesRep(u.alpha, u.inc, tuple(x * c for x in u.coeffs), u.order)


def srs_shift(u: SeriesRep, q) -> SeriesRep:
    """u * z^q."""
    q = Fraction(q)
    order = u.order.shift(q)
    if u.is_zero():
        return SeriesRep.zero(order)
    return SeriesRep(u.alpha + q, u.inc, u.coeffs, order)


def product_order(u: SeriesRep, v: SeriesRep) -> OrderTerm:
    """Error order of u*v from the operands' errors."""
    if u.is_zero() and v.is_zero():
        return multiply_orders(u.order, v.order)
    if u.is_zero():
        return u.order.shift(v.alpha)
    if v.is_zero():
        return v.order.shift(u.alpha)
    return combine_orders(u.order.shift(v.alpha), v.order.shift(u.alpha))


def srs_mul(u: SeriesRep, v: SeriesRep, k=None) -> SeriesRep:
    """Cauchy product; with k, terms above z^k are summarized as o(z^k)."""
    order = product_order(u, v)
    if u.is_zero() or v.is_zero():
        return SeriesRep.zero(order)
    bound = order.nu if order.kind != EXACT else INF
    target = _target(k)
    limit = min(bound, target)
    top = u.alpha + v.alpha + (len(u.coeffs) - 1) * u.inc + (len(v.coeffs) - 1) * v.inc
    if top > target:
        order = combine_orders(order, little_o(target))
    g = frac_gcd(u.inc, v.inc) if (u.inc or v.inc) else Fraction(1)
    su = int(u.inc / g) if u.inc else 0
    sv = int(v.inc / g) if v.inc else 0
    base = u.alpha + v.alpha
    acc = {}
    for i, cu in enumerate(u.coeffs):
        if not cu:
            continue
        ei = base + i * u.inc
        if ei > limit:
            break
        for j, cv in enumerate(v.coeffs):
            if not cv:
                continue
            idx = i * su + j * sv
            if base + idx * g > limit:
                break
            p = cu * cv
            acc[idx] = acc[idx] + p if idx in acc else p
    terms = [(base + idx * g, c) for idx, c in acc.items()]
    return SeriesRep.from_terms(terms, order)


def srs_reciprocal(v: SeriesRep, k=None) -> SeriesRep:
    if v.is_zero():
        if v.order.kind == EXACT:
            raise DivisionByZeroSeries("division by the zero series")
        raise InsufficientOrder("divisor has no known nonzero term", needed=None)
    c, beta, w, g = relative_form(v)
    order = v.order.shift(-2 * beta)
    cinv = c.inverse()
    if is_zero_ps(w):
        return SeriesRep.from_terms([(-beta, cinv)], order)
    target = _target(k)
    limit = min(target, order.nu if order.kind != EXACT else INF)
    N = term_count(limit, -beta, g)
    if N < 0:
        return SeriesRep.zero(combine_orders(order, little_o(target)))
    r = P.ps_inv(P.pad([C.ONE] + w[1:], N), N)
    if target < INF:
        order = combine_orders(order, little_o(target))
    return from_t_series(r, -beta, g, order, cinv)


def srs_div(u: SeriesRep, v: SeriesRep, k=None) -> SeriesRep:
    """u / v; k is the target order for the quotient."""
    if v.is_zero():
        return srs_reciprocal(v, k)
    c, beta, _, _ = relative_form(v)
    if u.is_zero():
        if u.order.kind == EXACT:
            return SeriesRep.zero()
        return SeriesRep.zero(u.order.shift(-beta))
    kr = None if k is None else Fraction(k) - u.alpha
    return srs_mul(u, srs_reciprocal(v, kr), k)


def srs_pow(u: SeriesRep, gamma, k=None) -> SeriesRep:
    """u^gamma for rational gamma, principal branch."""
    gamma = Fraction(gamma)
    if gamma == 0:
        return SeriesRep.constant(C.ONE)
    if gamma == 1:
        return u
    if u.is_zero():
        if u.order.kind == EXACT:
            if gamma < 0:
                raise DivisionByZeroSeries("negative power of the zero series")
            return SeriesRep.zero()
        if gamma < 0:
            raise InsufficientOrder("base has no known nonzero term", needed=None)
        o = u.order
        return SeriesRep.zero(OrderTerm(o.kind, o.nu * gamma, o.tags))
    if gamma.denominator == 1 and 1 < gamma <= 16 and len(u.coeffs) > 1:
        return _int_power(u, int(gamma), k)
    c, alpha, w, g = relative_form(u)
    base = gamma * alpha
    order = u.order.shift((gamma - 1) * alpha)
    cg = C.coeff_pow(c, gamma)
    if is_zero_ps(w):
        return SeriesRep.from_terms([(base, cg)], order)
    target = _target(k)
    limit = min(target, order.nu if order.kind != EXACT else INF)
    N = term_count(limit, base, g)
    if N < 0:
        return SeriesRep.zero(combine_orders(order, little_o(target)))
    f = P.ps_pow(P.pad([C.ONE] + w[1:], N), gamma, N, a0_power=C.ONE)
    if target < INF:
        order = combine_orders(order, little_o(target))
    return from_t_series(f, base, g, order, cg)


def _int_power(u, n, k):
    # u^e feeds a product with u^(n-e), so it must be good to k - (n-e)*alpha
    alpha = u.alpha
    target = (lambda e: None) if k is None else (lambda e: k - (n - e) * alpha)
    result, have = None, 0
    base, p = u, 1
    m = n
    while m:
        if m & 1:
            have += p
            result = base if result is None else srs_mul(result, base, target(have))
        m >>= 1
        if m:
            p += p
            base = srs_mul(base, base, target(p))
    return result


# calculus

def srs_diff(u: SeriesRep) -> SeriesRep:
    """d/dz, with ln z in coefficients differentiated by the chain rule."""
    terms = []
    for e, c in u.terms():
        d = c * C.Coefficient.scalar(e) + C.coeff_d_dL(c)
        if d:
            terms.append((e - 1, d))
    return SeriesRep.from_terms(terms, u.order.shift(-1))


def _log_poly(c: C.Coefficient):
    split = c.log_degree_split()
    if split is None:
        raise NonElementaryIntegral(f"coefficient {c!r} is not a polynomial in ln z")
    return split


def _from_log_poly(parts) -> C.Coefficient:
    out = C.ZERO
    for j, a in parts.items():
        if a:
            out = out + a * C.coeff_pow(C.L, j) if j else out + a
    return out


def srs_integrate(u: SeriesRep) -> SeriesRep:
    """Antiderivative with integration constant 0."""
    terms = []
    for e, c in u.terms():
        parts = _log_poly(c)
        if e == -1:
            integ = {j + 1: a * C.Coefficient.scalar(Fraction(1, j + 1)) for j, a in parts.items()}
            terms.append((Fraction(0), _from_log_poly(integ)))
            continue
        # (e+1) a + a' = c, solved from the top L-degree down
        s = C.Coefficient.scalar(Fraction(1) / (e + 1))
        top = max(parts)
        a = {}
        for j in range(top, -1, -1):
            rhs = parts.get(j, C.ZERO)
            if j + 1 in a:
                rhs = rhs - a[j + 1] * C.Coefficient.scalar(j + 1)
            a[j] = rhs * s
        terms.append((e + 1, _from_log_poly(a)))
    return SeriesRep.from_terms(terms, u.order.shift(1))
