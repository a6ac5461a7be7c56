"""Independent reference values for series coefficients.

Derivatives come from the package's symbolic ``diff``; evaluation at 0 is
done by sympy on the printed derivative, so no series code is involved.
"""

import math
from fractions import Fraction

import sympy

from pkx import expr as ex
from pkx.rewrite import diff

_NAMES = {"ln": sympy.log, "arcsin": sympy.asin, "arccos": sympy.acos, "arctan": sympy.atan,
          "arcsinh": sympy.asinh, "arccosh": sympy.acosh, "arctanh": sympy.atanh,
          "I": sympy.I}


def to_sympy(e, var="z"):
    return sympy.sympify(ex.to_text(e), locals={**_NAMES, var: sympy.Symbol(var)})


def taylor_coefficients(e, n, var="z"):
    """[f(0), f'(0)/1!, ..., f^(n)(0)/n!] as Fractions (sympy values if irrational)."""
    z = sympy.Symbol(var)
    out = []
    d = e
    for j in range(n + 1):
        value = sympy.nsimplify(to_sympy(d, var).xreplace({z: 0})) / math.factorial(j)
        out.append(Fraction(int(value.p), int(value.q)) if value.is_Rational else value)
        if j < n:
            d = diff(d, var)
    return out


def sympy_series_coefficients(text, n, var="z"):
    """Coefficients through z^n from sympy's own series, for cross-checks."""
    z = sympy.Symbol(var)
    s = sympy.series(sympy.sympify(text, locals={**_NAMES, var: z}), z, 0, n + 1).removeO()
    return [sympy.expand(s).coeff(z, j) for j in range(n + 1)]
