"""Conversions between expression trees and coefficients."""

from __future__ import annotations

from fractions import Fraction

from . import coeff as C
from . import expr as ex


def is_constant(e: ex.Expr, var: str) -> bool:
    return not ex.depends_on(e, var)


def expr_to_coefficient(e: ex.Expr) -> C.Coefficient:
    """Exact coefficient for an expression free of the series variable.

    Symbols become named-constant atoms (``pi`` is the circle constant);
    functions of constants are evaluated exactly when possible and become
    opaque atoms otherwise.
    """
    if isinstance(e, ex.Num):
        return C.Coefficient.scalar(e.value)
    if isinstance(e, ex.Sym):
        if e.name == "pi":
            return C.PI_C
        return C.Coefficient.atom(C.named_constant(e.name))
    if isinstance(e, ex.Add):
        out = C.ZERO
        for a in e.args:
            out = out + expr_to_coefficient(a)
        return out
    if isinstance(e, ex.Mul):
        out = C.ONE
        for a in e.args:
            out = out * expr_to_coefficient(a)
        return out
    if isinstance(e, ex.Pow):
        base = expr_to_coefficient(e.base)
        q = ex.rational_value(e.exp)
        if q is not None:
            return C.coeff_pow(base, q)
        return C.coeff_exp(expr_to_coefficient(e.exp) * C.coeff_log(base))
    return C.apply_function(e.func, expr_to_coefficient(e.arg))


def atom_to_expr(atom: C.Atom, log_expr: ex.Expr) -> ex.Expr:
    if atom.kind == "L":
        return log_expr
    if atom.kind == "E":
        return ex.apply("exp", ex.ONE)
    if atom.kind == "const":
        return ex.Sym(atom.name)
    if atom.kind == "rad":
        return ex.num(int(atom.name))
    if atom.kind == "fn":
        return ex.apply(atom.name, coefficient_to_expr(atom.arg, log_expr))
    return coefficient_to_expr(atom.arg, log_expr)


def _monomial_to_expr(mono, value, log_expr):
    factors = [ex.Num(value)]
    for atom, e in mono:
        if atom.kind == "E":
            factors.append(ex.apply("exp", ex.num(e)))
            continue
        factors.append(ex.Pow(atom_to_expr(atom, log_expr), ex.num(e)) if e != 1
                       else atom_to_expr(atom, log_expr))
    return ex.mul(*factors)


def _poly_to_expr(poly, log_expr):
    return ex.add(*(_monomial_to_expr(m, v, log_expr) for m, v in poly.items()))


def coefficient_to_expr(c: C.Coefficient, log_expr: ex.Expr = None) -> ex.Expr:
    """Expression for a coefficient; ``log_expr`` renders the ln z atom."""
    if log_expr is None:
        log_expr = ex.ln(ex.Sym("z"))
    num = _poly_to_expr(c.num, log_expr)
    if c.den_is_one():
        return num
    return ex.mul(num, ex.power(_poly_to_expr(c.den, log_expr), ex.MINUS_ONE))


def coefficient_text(c: C.Coefficient, log_expr: ex.Expr = None) -> str:
    return ex.to_text(coefficient_to_expr(c, log_expr))


def fraction_text(q: Fraction) -> str:
    return str(Fraction(q))
