"""Ordinary power series in an auxiliary variable t, truncated after t^N.

A series is a list of coefficients [a_0, ..., a_N].  These kernels are the
recurrences the series functions are built from; they know nothing about
exponent grids or error orders.

Each recurrence is written once over plain arithmetic operators.  When every
input coefficient is a real rational it runs on gmpy2 rationals and only the
result is wrapped back into coefficients, which is the common case and many
times faster than coefficient arithmetic.
"""

from __future__ import annotations

from typing import List

from gmpy2 import mpq

from . import coeff as C

PS = List[C.Coefficient]

_Q0 = mpq(0)
_Q1 = mpq(1)


def _get(a, i):
    return a[i] if i < len(a) else C.ZERO


def pad(a, N) -> PS:
    a = list(a[:N + 1])
    return a + [C.ZERO] * (N + 1 - len(a))


def _rational(seq):
    """seq as gmpy2 rationals, or None if some entry is not a real rational."""
    out = []
    for c in seq:
        q = C.coerce(c).as_mpq()
        if q is None:
            return None
        out.append(q)
    return out


def _wrap(seq) -> PS:
    return [C.Coefficient.from_mpq(q) for q in seq]


def _domain(*seqs):
    """(converted sequences, zero, one, wrap) in the fastest exact domain."""
    fast = []
    for s in seqs:
        r = _rational(s)
        if r is None:
            return [list(map(C.coerce, s)) for s in seqs], C.ZERO, C.ONE, list
        fast.append(r)
    return fast, _Q0, _Q1, _wrap


def _inverse(x):
    return _Q1 / x if isinstance(x, type(_Q1)) else x.inverse()


def ps_add(a, b, N) -> PS:
    return [_get(a, i) + _get(b, i) for i in range(N + 1)]


def ps_scale(a, c, N) -> PS:
    c = C.coerce(c)
    return [_get(a, i) * c for i in range(N + 1)]


def ps_mul(a, b, N) -> PS:
    (a, b), zero, _, wrap = _domain(a, b)
    out = [zero] * (N + 1)
    for i in range(min(len(a), N + 1)):
        ai = a[i]
        if not ai:
            continue
        for j in range(min(len(b), N + 1 - i)):
            bj = b[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return wrap(out)


def ps_inv(a, N) -> PS:
    """1/a for a_0 != 0."""
    (a,), zero, _, wrap = _domain(a)
    a0inv = _inverse(a[0])
    out = [a0inv] + [zero] * N
    for n in range(1, N + 1):
        acc = zero
        for m in range(1, min(n, len(a) - 1) + 1):
            if a[m]:
                acc = acc + a[m] * out[n - m]
        out[n] = -(acc * a0inv)
    return wrap(out)


def ps_div(a, b, N) -> PS:
    return ps_mul(a, ps_inv(b, N), N)


def ps_pow(a, gamma, N, a0_power=None) -> PS:
    """a^gamma for a_0 != 0 (principal branch for the constant factor)."""
    f0 = C.coerce(a0_power) if a0_power is not None else C.coeff_pow(a[0], gamma)
    gamma = mpq(int(gamma.numerator), int(gamma.denominator))
    (a,), zero, one, wrap = _domain(a)
    # the recurrence is linear in the leading value, so run it from 1 and scale
    out = [one] + [zero] * N
    if N:
        a0inv = _inverse(a[0])
        g1 = gamma + 1
        for n in range(1, N + 1):
            acc = zero
            for m in range(1, min(n, len(a) - 1) + 1):
                if a[m] and out[n - m]:
                    acc = acc + a[m] * out[n - m] * (g1 * m - n)
            out[n] = acc * a0inv * mpq(1, n)
    out = wrap(out)
    return out if f0 == C.ONE else [c * f0 for c in out]


def ps_exp(a, N) -> PS:
    """exp(a) for a_0 = 0."""
    (a,), zero, one, wrap = _domain(a)
    out = [one] + [zero] * N
    for n in range(1, N + 1):
        acc = zero
        for m in range(1, min(n, len(a) - 1) + 1):
            if a[m] and out[n - m]:
                acc = acc + a[m] * out[n - m] * m
        out[n] = acc * mpq(1, n)
    return wrap(out)


def ps_log(a, N) -> PS:
    """log(a) for a_0 = 1."""
    (a,), zero, _, wrap = _domain(a)
    out = [zero] * (N + 1)
    for n in range(1, N + 1):
        acc = (a[n] if n < len(a) else zero) * n
        for m in range(1, n):
            if out[m] and n - m < len(a) and a[n - m]:
                acc = acc - out[m] * a[n - m] * m
        out[n] = acc * mpq(1, n)
    return wrap(out)


def ps_sincos(a, N, hyperbolic=False):
    """(sin a, cos a) or (sinh a, cosh a) for a_0 = 0."""
    (a,), zero, one, wrap = _domain(a)
    s = [zero] * (N + 1)
    c = [one] + [zero] * N
    sign = 1 if hyperbolic else -1
    for n in range(1, N + 1):
        acc_s = zero
        acc_c = zero
        for m in range(1, min(n, len(a) - 1) + 1):
            if not a[m]:
                continue
            am = a[m] * m
            if c[n - m]:
                acc_s = acc_s + am * c[n - m]
            if s[n - m]:
                acc_c = acc_c + am * s[n - m]
        inv_n = mpq(1, n)
        s[n] = acc_s * inv_n
        c[n] = acc_c * inv_n * sign
    return wrap(s), wrap(c)


def ps_integral_compose(w, g, N, f0) -> PS:
    """h with h_0 = f0 and h' = g * w', i.e. f(t0 + w) given g = f'(t0 + w)."""
    (w, g), zero, _, wrap = _domain(w, g)
    out = [zero] * (N + 1)
    for n in range(1, N + 1):
        acc = zero
        for m in range(1, min(n, len(w) - 1) + 1):
            if w[m] and n - m < len(g) and g[n - m]:
                acc = acc + w[m] * g[n - m] * m
        out[n] = acc * mpq(1, n)
    out = wrap(out)
    out[0] = C.coerce(f0)
    return out
