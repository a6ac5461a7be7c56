"""Pre-series rewrites: exponential collection, value at zero, differentiation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from . import coeff as C
from . import expr as ex
from .convert import expr_to_coefficient
from .errors import PkxError

# exponential collection

_REAL_FUNCS = {"exp", "sin", "cos", "tan", "sinh", "cosh", "tanh", "arctan", "arcsinh"}


def is_known_real(e: ex.Expr, real_vars: Iterable[str] = ()) -> bool:
    """Conservative syntactic realness test."""
    real_vars = set(real_vars)
    if isinstance(e, ex.Num):
        return e.value.is_real()
    if isinstance(e, ex.Sym):
        return e.name in real_vars or e.name == "pi"
    if isinstance(e, (ex.Add, ex.Mul)):
        return all(is_known_real(a, real_vars) for a in e.args)
    if isinstance(e, ex.Pow):
        q = ex.rational_value(e.exp)
        return q is not None and q.denominator == 1 and is_known_real(e.base, real_vars)
    return e.func in _REAL_FUNCS and is_known_real(e.arg, real_vars)


def _as_exp_power(f: ex.Expr, real_vars):
    """If f is exp(u)^v with a rewritable v, return the exponent u*v."""
    if isinstance(f, ex.Apply) and f.func == "exp":
        return f.arg
    if isinstance(f, ex.Pow) and isinstance(f.base, ex.Apply) and f.base.func == "exp":
        if ex.rational_value(f.exp) is not None or is_known_real(f.exp, real_vars):
            return ex.mul(f.base.arg, f.exp)
    return None


def collect_exponentials(e: ex.Expr, real_vars: Iterable[str] = ()) -> ex.Expr:
    """e^u e^v -> e^(u+v), e^u/e^v -> e^(u-v), (e^u)^v -> e^(uv) for real v."""
    real_vars = frozenset(real_vars)
    return _collect(e, real_vars)


def _collect(e, real_vars):
    if isinstance(e, (ex.Num, ex.Sym)):
        return e
    if isinstance(e, ex.Apply):
        return ex.apply(e.func, _collect(e.arg, real_vars))
    if isinstance(e, ex.Add):
        return ex.add(*(_collect(a, real_vars) for a in e.args))
    if isinstance(e, ex.Pow):
        f = ex.power(_collect(e.base, real_vars), _collect(e.exp, real_vars))
        u = _as_exp_power(f, real_vars)
        if u is not None and isinstance(f, ex.Pow):
            return ex.apply("exp", _collect(u, real_vars))
        return f
    # Mul
    factors = [_collect(a, real_vars) for a in e.args]
    exponents = []
    rest = []
    for f in factors:
        u = _as_exp_power(f, real_vars)
        if u is None:
            rest.append(f)
        else:
            exponents.append(u)
    if not exponents:
        return ex.mul(*rest)
    return ex.mul(*rest, ex.apply("exp", _collect(ex.add(*exponents), real_vars)))


# value at zero

@dataclass(frozen=True)
class ExtendedValue:
    """FiniteValue (kind "finite", value set), InfiniteMagnitude or Indeterminate."""

    kind: str
    value: Optional[C.Coefficient] = None

    @property
    def is_finite(self):
        return self.kind == "finite"

    def __repr__(self):
        if self.kind == "finite":
            return f"FiniteValue({self.value!r})"
        return "InfiniteMagnitude" if self.kind == "infinite" else "Indeterminate"


def FiniteValue(c) -> ExtendedValue:
    return ExtendedValue("finite", C.coerce(c))


InfiniteMagnitude = ExtendedValue("infinite")
Indeterminate = ExtendedValue("indeterminate")


def eval_at_zero(u: ex.Expr, var: str = "z") -> ExtendedValue:
    """Structural value of u as var -> 0; not a limit engine."""
    try:
        return _eval0(u, var)
    except PkxError:
        return Indeterminate


def _eval0(u, var):
    if not ex.depends_on(u, var):
        return FiniteValue(expr_to_coefficient(u))
    if isinstance(u, ex.Sym):
        return FiniteValue(C.ZERO)
    if isinstance(u, ex.Add):
        vals = [_eval0(a, var) for a in u.args]
        if any(v.kind == "indeterminate" for v in vals):
            return Indeterminate
        infinite = sum(v.kind == "infinite" for v in vals)
        if infinite == 1:
            return InfiniteMagnitude
        if infinite > 1:
            return Indeterminate
        total = C.ZERO
        for v in vals:
            total = total + v.value
        return FiniteValue(total)
    if isinstance(u, ex.Mul):
        vals = [_eval0(a, var) for a in u.args]
        if any(v.kind == "indeterminate" for v in vals):
            return Indeterminate
        finite = [v.value for v in vals if v.is_finite]
        if len(finite) < len(vals):
            if any(not c for c in finite):
                return Indeterminate
            return InfiniteMagnitude
        total = C.ONE
        for c in finite:
            total = total * c
        return FiniteValue(total)
    if isinstance(u, ex.Pow):
        q = ex.rational_value(u.exp)
        if q is None:
            return _eval0(ex.apply("exp", ex.mul(u.exp, ex.ln(u.base))), var)
        b = _eval0(u.base, var)
        if b.kind == "indeterminate":
            return b
        if b.kind == "infinite":
            return InfiniteMagnitude if q > 0 else FiniteValue(C.ZERO)
        if not b.value:
            return FiniteValue(C.ZERO) if q > 0 else InfiniteMagnitude
        return FiniteValue(C.coeff_pow(b.value, q))
    a = _eval0(u.arg, var)
    if u.func == "ln":
        if a.kind == "infinite" or (a.is_finite and not a.value):
            return InfiniteMagnitude
        if a.kind == "indeterminate":
            return a
        return FiniteValue(C.coeff_log(a.value))
    if not a.is_finite:
        return Indeterminate
    return FiniteValue(C.apply_function(u.func, a.value))


# differentiation (test oracle support)

def _fderiv(func: str, u: ex.Expr) -> ex.Expr:
    half = ex.num(Fraction(-1, 2))
    one = ex.ONE
    if func == "exp":
        return ex.apply("exp", u)
    if func == "ln":
        return ex.power(u, ex.MINUS_ONE)
    if func == "sin":
        return ex.apply("cos", u)
    if func == "cos":
        return ex.neg(ex.apply("sin", u))
    if func == "tan":
        return ex.add(one, ex.power(ex.apply("tan", u), 2))
    if func == "sinh":
        return ex.apply("cosh", u)
    if func == "cosh":
        return ex.apply("sinh", u)
    if func == "tanh":
        return ex.add(one, ex.neg(ex.power(ex.apply("tanh", u), 2)))
    if func == "arcsin":
        return ex.power(ex.add(one, ex.neg(ex.power(u, 2))), half)
    if func == "arccos":
        return ex.neg(ex.power(ex.add(one, ex.neg(ex.power(u, 2))), half))
    if func == "arctan":
        return ex.power(ex.add(one, ex.power(u, 2)), ex.MINUS_ONE)
    if func == "arcsinh":
        return ex.power(ex.add(one, ex.power(u, 2)), half)
    if func == "arccosh":
        return ex.mul(ex.power(ex.add(u, ex.MINUS_ONE), half), ex.power(ex.add(u, one), half))
    if func == "arctanh":
        return ex.power(ex.add(one, ex.neg(ex.power(u, 2))), ex.MINUS_ONE)
    raise ValueError(func)


@lru_cache(maxsize=1 << 14)
def diff(e: ex.Expr, var: str) -> ex.Expr:
    """Exact symbolic derivative of e with respect to var."""
    if not ex.depends_on(e, var):
        return ex.ZERO
    if isinstance(e, ex.Sym):
        return ex.ONE
    if isinstance(e, ex.Add):
        return ex.add(*(diff(a, var) for a in e.args))
    if isinstance(e, ex.Mul):
        terms = []
        for i, a in enumerate(e.args):
            da = diff(a, var)
            if da != ex.ZERO:
                terms.append(ex.mul(*e.args[:i], da, *e.args[i + 1:]))
        return ex.add(*terms)
    if isinstance(e, ex.Pow):
        b, p = e.base, e.exp
        if not ex.depends_on(p, var):
            return ex.mul(p, ex.power(b, ex.add(p, ex.MINUS_ONE)), diff(b, var))
        return ex.mul(e, ex.add(ex.mul(diff(p, var), ex.ln(b)),
                                ex.mul(p, diff(b, var), ex.power(b, ex.MINUS_ONE))))
    return ex.mul(_fderiv(e.func, e.arg), diff(e.arg, var))
