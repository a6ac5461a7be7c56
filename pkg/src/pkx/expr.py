"""Expression trees with light canonicalization, text/JSON printing.

Nodes are immutable and hashable.  Build them through :func:`add`,
:func:`mul`, :func:`power` and :func:`apply`, which flatten, fold numeric
constants, collect like terms and sort operands deterministically; the raw
dataclass constructors skip all of that.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

from .coeff import GaussianRational

FUNCTIONS = ("exp", "ln", "sin", "cos", "tan", "sinh", "cosh", "tanh",
             "arcsin", "arccos", "arctan", "arcsinh", "arccosh", "arctanh")


class Expr:
    __slots__ = ()

    def __add__(self, o):
        return add(self, as_expr(o))

    def __radd__(self, o):
        return add(as_expr(o), self)

    def __sub__(self, o):
        return add(self, neg(as_expr(o)))

    def __rsub__(self, o):
        return add(as_expr(o), neg(self))

    def __mul__(self, o):
        return mul(self, as_expr(o))

    def __rmul__(self, o):
        return mul(as_expr(o), self)

    def __truediv__(self, o):
        return mul(self, power(as_expr(o), MINUS_ONE))

    def __rtruediv__(self, o):
        return mul(as_expr(o), power(self, MINUS_ONE))

    def __neg__(self):
        return neg(self)

    def __pow__(self, o):
        return power(self, as_expr(o))

    def __str__(self):
        return to_text(self)


def _cached_hash(cls):
    """Trees are hashed constantly as cache keys; remember each node's hash."""
    generated = cls.__hash__

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = generated(self)
            object.__setattr__(self, "_hash", h)
        return h

    cls.__hash__ = __hash__
    return cls


@_cached_hash
@dataclass(frozen=True)
class Num(Expr):
    value: GaussianRational

    def __repr__(self):
        return f"Num({self.value!r})"


@_cached_hash
@dataclass(frozen=True)
class Sym(Expr):
    name: str

    def __repr__(self):
        return f"Sym({self.name!r})"


@_cached_hash
@dataclass(frozen=True)
class Add(Expr):
    args: Tuple[Expr, ...]


@_cached_hash
@dataclass(frozen=True)
class Mul(Expr):
    args: Tuple[Expr, ...]


@_cached_hash
@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: Expr


@_cached_hash
@dataclass(frozen=True)
class Apply(Expr):
    func: str
    arg: Expr


def num(value) -> Num:
    if isinstance(value, GaussianRational):
        return Num(value)
    return Num(GaussianRational(Fraction(value)))


ZERO = num(0)
ONE = num(1)
MINUS_ONE = num(-1)
I = Num(GaussianRational(0, 1))


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, str):
        return Sym(x)
    return num(x)


def rational_value(e: Expr):
    """The Fraction held by a real numeric node, else None."""
    if isinstance(e, Num) and e.value.is_real():
        return e.value.re
    return None


# ordering

_RANK = {Num: 0, Sym: 1, Pow: 2, Apply: 3, Mul: 4, Add: 5}


@lru_cache(maxsize=200_000)
def sort_key(e: Expr):
    if isinstance(e, Num):
        return (0, (e.value.re, e.value.im))
    if isinstance(e, Sym):
        return (1, e.name)
    if isinstance(e, Pow):
        return (2, sort_key(e.base), sort_key(e.exp))
    if isinstance(e, Apply):
        return (3, e.func, sort_key(e.arg))
    return (_RANK[type(e)], tuple(sort_key(a) for a in e.args))


# canonical constructors

def _split_coeff(term: Expr):
    """term == c * rest with c numeric."""
    if isinstance(term, Mul) and isinstance(term.args[0], Num):
        rest = term.args[1:]
        return term.args[0].value, rest[0] if len(rest) == 1 else Mul(rest)
    if isinstance(term, Num):
        return term.value, ONE
    return GaussianRational(1), term


def add(*operands) -> Expr:
    flat = []
    for op in operands:
        op = as_expr(op)
        if isinstance(op, Add):
            flat.extend(op.args)
        else:
            flat.append(op)
    constant = GaussianRational()
    collected = {}
    order = []
    for t in flat:
        if isinstance(t, Num):
            constant = constant + t.value
            continue
        c, rest = _split_coeff(t)
        if rest in collected:
            collected[rest] = collected[rest] + c
        else:
            collected[rest] = c
            order.append(rest)
    terms = []
    for rest in order:
        c = collected[rest]
        if c:
            terms.append(_scale(c, rest))
    terms.sort(key=sort_key)
    if constant:
        terms.append(Num(constant))
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    return Add(tuple(terms))


def _scale(c: GaussianRational, rest: Expr) -> Expr:
    if c == 1:
        return rest
    if isinstance(rest, Mul):
        return Mul((Num(c),) + rest.args)
    return Mul((Num(c), rest))


def neg(e: Expr) -> Expr:
    return mul(MINUS_ONE, e)


def _base_exp(f: Expr):
    if isinstance(f, Pow):
        return f.base, f.exp
    return f, ONE


def mul(*operands) -> Expr:
    flat = []
    for op in operands:
        op = as_expr(op)
        if isinstance(op, Mul):
            flat.extend(op.args)
        else:
            flat.append(op)
    constant = GaussianRational(1)
    exps = {}
    order = []
    for f in flat:
        if isinstance(f, Num):
            constant = constant * f.value
            continue
        b, e = _base_exp(f)
        if b in exps and isinstance(e, Num) and isinstance(exps[b], Num):
            exps[b] = Num(exps[b].value + e.value)
        elif b in exps:
            exps[b] = add(exps[b], e)
        else:
            exps[b] = e
            order.append(b)
    if not constant:
        return ZERO
    factors = []
    for b in order:
        f = power(b, exps[b])
        if isinstance(f, Num):
            constant = constant * f.value
        elif isinstance(f, Mul):
            for g in f.args:
                if isinstance(g, Num):
                    constant = constant * g.value
                else:
                    factors.append(g)
        elif f != ONE:
            factors.append(f)
    if not constant:
        return ZERO
    factors.sort(key=sort_key)
    if constant != 1:
        factors.insert(0, Num(constant))
    if not factors:
        return ONE
    if len(factors) == 1:
        return factors[0]
    return Mul(tuple(factors))


def power(base, exponent) -> Expr:
    base, exponent = as_expr(base), as_expr(exponent)
    if isinstance(exponent, Num):
        if not exponent.value:
            return ONE
        if exponent.value == 1:
            return base
        q = exponent.value.re if exponent.value.is_real() else None
        if q is not None and q.denominator == 1:
            n = int(q)
            if isinstance(base, Num):
                if not base.value and n < 0:
                    return Pow(base, exponent)
                return Num(base.value ** n)
            if isinstance(base, Pow):
                return power(base.base, mul(base.exp, exponent))
            if isinstance(base, Mul):
                return mul(*(power(f, exponent) for f in base.args))
        if isinstance(base, Num) and base.value == 1:
            return ONE
        if isinstance(base, Num) and not base.value and q is not None and q > 0:
            return ZERO
    return Pow(base, exponent)


def apply(func: str, arg) -> Expr:
    if func not in FUNCTIONS:
        raise ValueError(f"unknown function {func!r}")
    return Apply(func, as_expr(arg))


def sqrt(x) -> Expr:
    return power(x, num(Fraction(1, 2)))


def exp(x) -> Expr:
    return apply("exp", x)


def ln(x) -> Expr:
    return apply("ln", x)


# traversal helpers

def children(e: Expr) -> tuple:
    if isinstance(e, (Add, Mul)):
        return e.args
    if isinstance(e, Pow):
        return (e.base, e.exp)
    if isinstance(e, Apply):
        return (e.arg,)
    return ()


@lru_cache(maxsize=1 << 14)
def free_symbols(e: Expr) -> frozenset:
    if isinstance(e, Sym):
        return frozenset((e.name,))
    if isinstance(e, Num):
        return frozenset()
    if isinstance(e, (Add, Mul)):
        out = frozenset()
        for a in e.args:
            out |= free_symbols(a)
        return out
    if isinstance(e, Pow):
        return free_symbols(e.base) | free_symbols(e.exp)
    return free_symbols(e.arg)


def depends_on(e: Expr, var: str) -> bool:
    return var in free_symbols(e)


def substitute(e: Expr, mapping: dict) -> Expr:
    """Simultaneous substitution of symbols by expressions, re-canonicalizing."""
    if isinstance(e, Sym):
        return mapping.get(e.name, e)
    if isinstance(e, Num):
        return e
    if isinstance(e, Add):
        return add(*(substitute(a, mapping) for a in e.args))
    if isinstance(e, Mul):
        return mul(*(substitute(a, mapping) for a in e.args))
    if isinstance(e, Pow):
        return power(substitute(e.base, mapping), substitute(e.exp, mapping))
    return apply(e.func, substitute(e.arg, mapping))


# text printing

def _num_text(v: GaussianRational) -> str:
    if v.is_real():
        return str(v.re)
    re, im = v.re, v.im
    if im == 1:
        imag = "I"
    elif im == -1:
        imag = "-I"
    else:
        imag = f"{im}*I"
    if not re:
        return imag
    if imag.startswith("-"):
        return f"{re} - {imag[1:]}"
    return f"{re} + {imag}"


def is_negative_term(e: Expr) -> bool:
    if isinstance(e, Num):
        return e.value.is_real() and e.value.re < 0 or (not e.value.re and e.value.im < 0)
    if isinstance(e, Mul) and isinstance(e.args[0], Num):
        return is_negative_term(e.args[0])
    return False


def needs_parens_as_factor(e: Expr) -> bool:
    if isinstance(e, Add):
        return True
    if isinstance(e, Num):
        return bool(e.value.re) and bool(e.value.im)
    return False


def _atomic(e: Expr) -> bool:
    if isinstance(e, (Sym, Apply)):
        return True
    if isinstance(e, Num):
        v = e.value
        return v.is_real() and v.re >= 0 and v.re.denominator == 1
    return False


def to_text(e: Expr) -> str:
    if isinstance(e, Num):
        return _num_text(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Apply):
        return f"{e.func}({to_text(e.arg)})"
    if isinstance(e, Pow):
        b = to_text(e.base)
        if not _atomic(e.base):
            b = f"({b})"
        x = e.exp
        xs = to_text(x)
        if not (isinstance(x, Sym) or (_atomic(x) and isinstance(x, Num))):
            xs = f"({xs})"
        return f"{b}^{xs}"
    if isinstance(e, Add):
        out = to_text(e.args[0])
        for t in e.args[1:]:
            if is_negative_term(t):
                out += " - " + to_text(neg(t))
            else:
                out += " + " + to_text(t)
        return out
    # Mul
    args = list(e.args)
    prefix = ""
    if isinstance(args[0], Num):
        c = args[0].value
        if is_negative_term(args[0]):
            prefix = "-"
            c = -c
        if c == 1:
            args = args[1:]
        else:
            args[0] = Num(c)
    parts = []
    for f in args:
        s = to_text(f)
        parts.append(f"({s})" if needs_parens_as_factor(f) else s)
    return prefix + "*".join(parts)


# JSON printing

def to_json_obj(e: Expr):
    if isinstance(e, Num):
        v = e.value
        return {"type": "Num", "re": str(v.re), "im": str(v.im)}
    if isinstance(e, Sym):
        return {"type": "Sym", "name": e.name}
    if isinstance(e, Apply):
        return {"type": "Apply", "func": e.func, "arg": to_json_obj(e.arg)}
    if isinstance(e, Pow):
        return {"type": "Pow", "base": to_json_obj(e.base), "exp": to_json_obj(e.exp)}
    return {"type": type(e).__name__, "args": [to_json_obj(a) for a in e.args]}


def from_json_obj(obj) -> Expr:
    t = obj["type"]
    if t == "Num":
        return Num(GaussianRational(Fraction(obj["re"]), Fraction(obj["im"])))
    if t == "Sym":
        return Sym(obj["name"])
    if t == "Apply":
        return apply(obj["func"], from_json_obj(obj["arg"]))
    if t == "Pow":
        return power(from_json_obj(obj["base"]), from_json_obj(obj["exp"]))
    args = [from_json_obj(a) for a in obj["args"]]
    return add(*args) if t == "Add" else mul(*args)


def to_print(e: Expr, format: str = "text") -> str:
    if format == "json":
        return json.dumps(to_json_obj(e))
    return to_text(e)
