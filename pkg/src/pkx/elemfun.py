"""Elementary functions of a series argument.

Each kernel takes the argument series and a target order ``k``.  Error
orders propagate as f'(U) * E: the argument's error is shifted by the
dominant exponent of the derivative, which is exact for the regular cases
handled here, so the error kind is preserved.
"""

from __future__ import annotations

from fractions import Fraction

from . import coeff as C
from . import powerseries as P
from .arith import (from_t_series, is_zero_ps, relative_form, split_constant, srs_add,
                    srs_mul, srs_neg, srs_pow, srs_reciprocal, srs_scale, term_count)
from .errors import (DivisionByZeroSeries, EssentialSingularity, InsufficientOrder,
                     UnsupportedExpression)
from .series import (EXACT, INF, SeriesRep, combine_orders, correct_to, little_o,
                     multiply_orders)

HALF = Fraction(1, 2)


def _target(k):
    return INF if k is None else Fraction(k)


def _limit(order, k):
    return min(_target(k), order.nu if order.kind != EXACT else INF)


def _with_trunc(order, k, lossy):
    if lossy and k is not None:
        return combine_orders(order, little_o(k))
    return order


def _regular_prelude(u: SeriesRep, name: str):
    """Reject essential singularities; return (t0, w, g)."""
    if u.coeffs and u.alpha < 0:
        raise EssentialSingularity(
            f"{name} of an argument with dominant exponent {u.alpha} has an essential "
            f"singularity", name)
    if not correct_to(u, 0):
        raise InsufficientOrder(f"{name} needs its argument through z^0", needed=Fraction(0))
    return split_constant(u)


def _log_degree(poly) -> int:
    return max((int(e) for m in poly for a, e in m if a.kind == "L"), default=0)


def split_log_linear(t0: C.Coefficient):
    """Write t0 = q*ln z + s with q rational and s free of ln z at top level."""
    if not t0.depends_on_log():
        return Fraction(0), t0
    parts = t0.log_degree_split()
    if parts is None:
        if _log_degree(t0.num) >= _log_degree(t0.den) and _log_degree(t0.num) > 0:
            raise UnsupportedExpression(
                "exponential of an unbounded function of ln z is not a generalized Puiseux series")
        return Fraction(0), t0
    if max(parts) > 1:
        raise UnsupportedExpression(
            "exponential of a power of ln z is not a generalized Puiseux series")
    q = parts.get(1, C.ZERO).as_rational()
    if q is None:
        raise UnsupportedExpression("exponential of a non-rational multiple of ln z")
    return q, parts.get(0, C.ZERO)


# exp

def srs_exp(u: SeriesRep, k=None) -> SeriesRep:
    t0, w, g = _regular_prelude(u, "exp")
    q, s = split_log_linear(t0)
    scale = C.coeff_exp(s)
    order = u.order.shift(q)
    if is_zero_ps(w):
        return SeriesRep.from_terms([(q, scale)], order)
    N = term_count(_limit(order, k), q, g)
    if N < 0:
        return SeriesRep.zero(_with_trunc(order, k, True))
    e = P.ps_exp(P.pad(w, N), N)
    return from_t_series(e, q, g, _with_trunc(order, k, True), scale)


# log

def srs_log(u: SeriesRep, k=None) -> SeriesRep:
    if u.is_zero():
        if u.order.kind == EXACT:
            raise DivisionByZeroSeries("logarithm of the zero series")
        raise InsufficientOrder("logarithm needs the dominant term of its argument")
    c, alpha, w, g = relative_form(u)
    const = C.coeff_log(c) + C.L * C.Coefficient.scalar(alpha)
    order = u.order.shift(-alpha)
    if is_zero_ps(w):
        return SeriesRep.from_terms([(0, const)], order)
    N = term_count(_limit(order, k), 0, g)
    if N < 0:
        return SeriesRep.zero(_with_trunc(order, k, True))
    lw = P.ps_log(P.pad([C.ONE] + w[1:], N), N)
    lw[0] = const
    return from_t_series(lw, 0, g, _with_trunc(order, k, True))


# trigonometric and hyperbolic

def _sincos_family(u, k, name):
    hyper = name in ("sinh", "cosh", "tanh")
    t0, w, g = _regular_prelude(u, name)
    fs, fc = ("sinh", "cosh") if hyper else ("sin", "cos")
    s0 = C.apply_function(fs, t0)
    c0 = C.apply_function(fc, t0)
    if name in ("tan", "tanh") and not c0:
        return _tan_pole(u, k, name, w, g)
    slope = {"sin": c0, "sinh": c0, "cos": -s0, "cosh": s0}.get(name)
    if slope is not None and not slope:
        # f'(t0) = 0, so an error e in the argument moves f only by about w*e
        if is_zero_ps(w):
            order = multiply_orders(u.order, u.order)
        else:
            sigma = next(i for i, x in enumerate(w) if x) * g
            order = u.order.shift(sigma)
    else:
        order = u.order
    if is_zero_ps(w):
        value = {"sin": s0, "sinh": s0, "cos": c0, "cosh": c0}.get(name)
        if value is None:
            value = C.apply_function(name, t0) if t0 else C.ZERO
        return SeriesRep.from_terms([(0, value)], order)
    N = term_count(_limit(order, k), 0, g)
    if N < 0:
        return SeriesRep.zero(_with_trunc(order, k, True))
    S, Cc = P.ps_sincos(P.pad(w, N), N, hyperbolic=hyper)
    sin_part = P.ps_add(P.ps_scale(Cc, s0, N), P.ps_scale(S, c0, N), N)
    if hyper:
        cos_part = P.ps_add(P.ps_scale(Cc, c0, N), P.ps_scale(S, s0, N), N)
    else:
        cos_part = P.ps_add(P.ps_scale(Cc, c0, N), P.ps_scale(S, -s0, N), N)
    if name in ("sin", "sinh"):
        out = sin_part
    elif name in ("cos", "cosh"):
        out = cos_part
    else:
        out = P.ps_div(sin_part, cos_part, N)
    return from_t_series(out, 0, g, _with_trunc(order, k, True))


def _tan_pole(u, k, name, w, g):
    """tan(t0 + w) = -cos(w)/sin(w) when cos(t0) = 0; tanh(t0 + w) = cosh(w)/sinh(w)."""
    if is_zero_ps(w):
        raise DivisionByZeroSeries(f"{name} evaluated at a pole")
    j0 = next(i for i, x in enumerate(w) if x)
    sigma = j0 * g
    order = u.order.shift(-2 * sigma)
    N = term_count(_limit(order, k), -sigma, g)
    if N < 0:
        return SeriesRep.zero(_with_trunc(order, k, True))
    S, Cc = P.ps_sincos(P.pad(w, N + j0), N + j0, hyperbolic=name == "tanh")
    out = P.ps_mul(Cc, P.ps_inv(S[j0:], N), N)
    if name == "tan":
        out = [-c for c in out]
    return from_t_series(out, -sigma, g, _with_trunc(order, k, True))


def srs_sin(u, k=None):
    return _sincos_family(u, k, "sin")


def srs_cos(u, k=None):
    return _sincos_family(u, k, "cos")


def srs_tan(u, k=None):
    return _sincos_family(u, k, "tan")


def srs_sinh(u, k=None):
    return _sincos_family(u, k, "sinh")


def srs_cosh(u, k=None):
    return _sincos_family(u, k, "cosh")


def srs_tanh(u, k=None):
    return _sincos_family(u, k, "tanh")


# inverse trigonometric and hyperbolic

_BRANCH_POINTS = {
    "arctan": ("I", "-I"), "arcsinh": ("I", "-I"),
    "arctanh": ("1", "-1"), "arcsin": ("1", "-1"),
    "arccos": ("1", "-1"), "arccosh": ("1", "-1"),
}
_UNITS = {"1": C.ONE, "-1": -C.ONE, "I": C.I, "-I": -C.I}


def _real_sign(c: C.Coefficient):
    """Sign of Re c when it is evident, else None."""
    if not c.is_monomial():
        return None
    (nm, nv), = c.num.items()
    (dm, dv), = c.den.items()
    if not all(a.is_positive() for a, _ in nm + dm):
        return None
    g = nv / dv
    if not g.is_real() or not g.re:
        return None
    return 1 if g.re > 0 else -1


def _const(c) -> SeriesRep:
    return SeriesRep.constant(c)


def _derivative_series(name, x, N):
    """f'(x) as a t-series, given x = t0 + w as a t-series."""
    one = [C.ONE]
    half = Fraction(-1, 2)
    if name == "arccosh":
        a = P.ps_add(x, [-C.ONE], N)
        b = P.ps_add(x, one, N)
        return P.ps_mul(P.ps_pow(a, half, N), P.ps_pow(b, half, N), N)
    x2 = P.ps_mul(x, x, N)
    if name in ("arctan", "arcsinh"):
        base = P.ps_add(one, x2, N)
    else:
        base = P.ps_add(one, P.ps_scale(x2, -C.ONE, N), N)
    if name in ("arctan", "arctanh"):
        return P.ps_inv(base, N)
    r = P.ps_pow(base, half, N)
    return P.ps_scale(r, -C.ONE, N) if name == "arccos" else r


def _inverse_regular(name, u, k, t0, w, g):
    order = u.order
    if is_zero_ps(w):
        return SeriesRep.from_terms([(0, C.apply_function(name, t0))], order)
    N = term_count(_limit(order, k), 0, g)
    if N < 0:
        return SeriesRep.zero(_with_trunc(order, k, True))
    w = P.pad(w, N)
    x = [t0] + w[1:]
    deriv = _derivative_series(name, x, max(N - 1, 0))
    h = P.ps_integral_compose(w, deriv, N, C.apply_function(name, t0))
    return from_t_series(h, 0, g, _with_trunc(order, k, True))


def _sqrt(u, k):
    return srs_pow(u, HALF, k)


def _log_formula(name, u, k, alpha=0):
    """Series-level logarithmic forms, valid at branch points and at infinity."""
    one = _const(C.ONE)
    a = min(Fraction(alpha), 0)
    if k is not None:
        # a negative target would starve the logarithm of its dominant term
        k = max(k, Fraction(0))
    # targets for the radical pieces, whose dominant exponents are alpha, 2 alpha
    # and alpha/2 when the argument is unbounded
    t1, t2, th = (None, None, None) if k is None else (k + a, k + 2 * a, k + a / 2)
    if name == "arctan":
        iu = srs_scale(u, C.I)
        d = srs_add(srs_log(srs_add(one, srs_neg(iu)), k), srs_neg(srs_log(srs_add(one, iu), k)))
        return srs_scale(d, C.I * C.HALF)
    if name == "arctanh":
        d = srs_add(srs_log(srs_add(one, u), k), srs_neg(srs_log(srs_add(one, srs_neg(u)), k)))
        return srs_scale(d, C.HALF)
    if name == "arccosh":
        root = srs_mul(_sqrt(srs_add(u, one), th), _sqrt(srs_add(u, srs_neg(one)), th), t1)
        return srs_log(srs_add(u, root), k)
    # at a branch point 1 - u^2 cancels, so its precision must come from u alone
    u2 = srs_mul(u, u, t2 if a < 0 else None)
    if name == "arcsinh":
        return srs_log(srs_add(u, _sqrt(srs_add(one, u2), t1)), k)
    root = _sqrt(srs_add(one, srs_neg(u2)), t1)
    res = srs_scale(srs_log(srs_add(srs_scale(u, C.I), root), k), -C.I)
    if name == "arcsin":
        return res
    return srs_add(_const(C.PI_C * C.HALF), srs_neg(res))


def _inverse_at_infinity(name, u, k):
    c, alpha = u.coeffs[0], u.alpha
    s = _real_sign(c)
    if s is not None and name in ("arctan", "arctanh"):
        recip = srs_reciprocal(u, k)
        t0, w, g = split_constant(recip)
        inner = _inverse_regular(name, recip, k, t0, w, g)
        if name == "arctan":
            return srs_add(_const(C.PI_C * C.HALF * s), srs_neg(inner))
        return srs_add(inner, _const(-(C.I * C.PI_C * C.HALF) * s))
    if s is not None and name == "arcsinh":
        if s < 0:
            return srs_neg(_inverse_at_infinity(name, srs_neg(u), k))
        one = _const(C.ONE)
        root = _sqrt(srs_add(one, srs_pow(u, -2, k)), k)
        return srs_add(srs_log(u, k), srs_log(srs_add(one, root), k))
    return _log_formula(name, u, k, alpha)


def _inverse(name, u: SeriesRep, k):
    if u.coeffs and u.alpha < 0:
        return _inverse_at_infinity(name, u, k)
    if not correct_to(u, 0):
        raise InsufficientOrder(f"{name} needs its argument through z^0", needed=Fraction(0))
    t0, w, g = split_constant(u)
    if any(C.coeff_equals(t0, _UNITS[b]) for b in _BRANCH_POINTS[name]):
        return _log_formula(name, u, k)
    return _inverse_regular(name, u, k, t0, w, g)


def srs_arctan(u, k=None):
    return _inverse("arctan", u, k)


def srs_arctanh(u, k=None):
    return _inverse("arctanh", u, k)


def srs_arcsin(u, k=None):
    return _inverse("arcsin", u, k)


def srs_arccos(u, k=None):
    return _inverse("arccos", u, k)


def srs_arcsinh(u, k=None):
    return _inverse("arcsinh", u, k)


def srs_arccosh(u, k=None):
    return _inverse("arccosh", u, k)


KERNELS = {
    "exp": srs_exp, "ln": srs_log,
    "sin": srs_sin, "cos": srs_cos, "tan": srs_tan,
    "sinh": srs_sinh, "cosh": srs_cosh, "tanh": srs_tanh,
    "arcsin": srs_arcsin, "arccos": srs_arccos, "arctan": srs_arctan,
    "arcsinh": srs_arcsinh, "arccosh": srs_arccosh, "arctanh": srs_arctanh,
}


def apply_series(name: str, u: SeriesRep, k=None) -> SeriesRep:
    """Apply the named elementary function to a series argument."""
    return KERNELS[name](u, k)
