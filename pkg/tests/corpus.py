"""Seeded random expression corpus shared by the property tests."""

import random
from fractions import Fraction

from pkx import expr as ex
from pkx.controller import Engine
from pkx.errors import PkxError
from pkx.rewrite import eval_at_zero

FUNCS = ("exp", "ln", "sin", "cos", "tan", "sinh", "cosh", "tanh",
         "arcsin", "arccos", "arctan", "arcsinh", "arccosh", "arctanh")
ANALYTIC_FUNCS = ("exp", "sin", "cos", "tan", "sinh", "cosh", "tanh",
                  "arcsin", "arctan", "arcsinh", "arctanh")
EXPONENTS = (Fraction(-1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(-1, 2),
             Fraction(1, 3))
CONSTANTS = (Fraction(1), Fraction(2), Fraction(-1), Fraction(1, 2), Fraction(3))

Z = ex.Sym("z")


def _leaf(rng, constants):
    r = rng.random()
    if r < 0.55 or (r >= 0.75 and not constants):
        return Z
    if r < 0.75:
        return ex.power(Z, ex.num(rng.choice((2, 3, Fraction(1, 2)))))
    return ex.num(rng.choice(CONSTANTS))


def random_expr(rng, depth, funcs=FUNCS, exponents=EXPONENTS, nest=0):
    """Constants are allowed at most one function level deep.  Deeper ones
    produce towers such as ln(ln(3)) whose rational-function coefficients
    make a single case cost seconds without exercising anything new."""
    if depth == 0 or rng.random() < 0.2:
        return _leaf(rng, nest < 2)
    r = rng.random()
    sub = lambda n=nest: random_expr(rng, depth - 1, funcs, exponents, n)
    if r < 0.25:
        return ex.add(sub(), sub())
    if r < 0.45:
        return ex.mul(sub(), sub())
    if r < 0.55:
        return ex.power(sub(), ex.num(rng.choice(exponents)))
    return ex.apply(rng.choice(funcs), sub(nest + 1))


_OPAQUE = ("fn", "root", "E", "const")


def _applications(e):
    if isinstance(e, ex.Apply):
        yield e
    for child in ex.children(e):
        yield from _applications(child)


def has_opaque_tower(e) -> bool:
    """True if some function is applied to an argument whose value at 0 is
    itself a transcendental constant, as in sin(exp(1 + z))."""
    for node in _applications(e):
        try:
            lead = Engine().series(node.arg, 0)
        except PkxError:
            continue
        for x, c in lead.terms():
            if x == 0 and any(a.kind in _OPAQUE for a in c.atoms()):
                return True
    return False


def corpus(n=220, seed=20240601, depth=4):
    """n distinct nonconstant expressions of depth <= depth, without opaque towers."""
    rng = random.Random(seed)
    seen = set()
    out = []
    while len(out) < n:
        try:
            e = random_expr(rng, depth)
        except Exception:
            continue
        if not ex.depends_on(e, "z") or e in seen or has_opaque_tower(e):
            continue
        seen.add(e)
        out.append(e)
    return out


def _integral_powers(e) -> bool:
    if isinstance(e, ex.Pow):
        q = ex.rational_value(e.exp)
        if q is None or q.denominator != 1 or q < 0:
            return False
    return all(_integral_powers(c) for c in ex.children(e))


def _arguments_vanish(e) -> bool:
    for node in _applications(e):
        v = eval_at_zero(node.arg, "z")
        if not v.is_finite or v.value:
            return False
    return True


def analytic_corpus(n=60, seed=7, depth=3):
    """Expressions analytic at 0 with rational Taylor coefficients: polynomial
    leaves, analytic functions of arguments vanishing at 0, sums, products
    and positive integer powers."""
    rng = random.Random(seed)
    seen = set()
    out = []
    while len(out) < n:
        try:
            e = random_expr(rng, depth, ANALYTIC_FUNCS, (Fraction(2), Fraction(3)))
        except Exception:
            continue
        if (not ex.depends_on(e, "z") or e in seen or not _integral_powers(e)
                or not _arguments_vanish(e)):
            continue
        seen.add(e)
        out.append(e)
    return out
