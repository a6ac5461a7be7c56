"""Rendering series results in the user's variable."""

from __future__ import annotations

import json
from fractions import Fraction

from . import coeff as C
from . import expr as ex
from .convert import coefficient_to_expr
from .frames import POS_INF, NEG_INF, DIRECTED, ExpansionFrame
from .series import EXACT, SeriesRep


def _wrap(e: ex.Expr) -> str:
    s = ex.to_text(e)
    return f"({s})" if isinstance(e, ex.Add) else s


def _term_text(c: C.Coefficient, power: ex.Expr, log_expr: ex.Expr) -> str:
    """Text of c * power, with a leading '-' when the term is negative."""
    r = c.as_rational()
    unit = power == ex.ONE
    if r is not None:
        sign = "-" if r < 0 else ""
        r = abs(r)
        if unit:
            return sign + str(r)
        body = _wrap(power) if r.numerator == 1 else f"{r.numerator}*{_wrap(power)}"
        if r.denominator != 1:
            body += f"/{r.denominator}"
        return sign + body
    ce = coefficient_to_expr(c, log_expr)
    lead, rest = ex._split_coeff(ce)
    if lead.is_real() and lead != 1 and not isinstance(rest, ex.Add):
        # a rational factor in front of a symbolic one: c*rest*power reads as rest*power/den
        return _term_text(C.coerce(lead.re), ex.mul(rest, power), log_expr)
    sign = ""
    if ex.is_negative_term(ce):
        sign, ce = "-", ex.neg(ce)
    text = ex.to_text(ce)
    if isinstance(ce, ex.Add) or (isinstance(ce, ex.Num) and ex.needs_parens_as_factor(ce)):
        text = f"({text})"
    if unit:
        return sign + text
    return f"{sign}{text}*{_wrap(power)}"


def _local_base(frame: ExpansionFrame) -> str:
    if frame.kind in (POS_INF, NEG_INF, DIRECTED):
        return frame.user_variable
    return _wrap(frame.back_substitution)


def order_text(series: SeriesRep, frame: ExpansionFrame) -> str:
    o = series.order
    if o.kind == EXACT:
        return f"Theta({_local_base(frame)}^inf)"
    _, power = frame.display_power(o.nu)
    return f"{o.kind}({ex.to_text(power)})"


def series_text(series: SeriesRep, frame: ExpansionFrame) -> str:
    """Ascending internal exponents, order term last."""
    log_expr = frame.log_display()
    parts = []
    for e, c in series.terms():
        scale, power = frame.display_power(e)
        parts.append(_term_text(c * scale, power, log_expr))
    if not parts:
        parts = ["0"]
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return f"{out} + {order_text(series, frame)}"


def series_json_obj(series: SeriesRep, frame: ExpansionFrame) -> dict:
    """Terms as coefficients of powers of the local variable (the back-substitution)."""
    log_expr = frame.log_display()
    o = series.order
    return {
        "variable": frame.user_variable,
        "point": frame.point_text(),
        "local": ex.to_text(frame.back_substitution),
        "terms": [{"exponent": str(Fraction(e)),
                   "coefficient": ex.to_text(coefficient_to_expr(c, log_expr))}
                  for e, c in series.terms()],
        "order": {"kind": o.kind,
                  "exponent": "inf" if o.kind == EXACT else str(Fraction(o.nu))},
    }


def series_json(series: SeriesRep, frame: ExpansionFrame) -> str:
    return json.dumps(series_json_obj(series, frame))
