"""Expansion points and the substitutions that move them to z = 0."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, Optional

from . import coeff as C
from . import expr as ex
from .convert import expr_to_coefficient

FINITE = "finite"
FROM_LEFT = "from_left"
POS_INF = "pos_inf"
NEG_INF = "neg_inf"
DIRECTED = "directed"


@dataclass(frozen=True)
class ExpansionFrame:
    """Where and in which variable an expansion is requested.

    ``value`` holds the finite point for FINITE/FROM_LEFT and the unit
    direction for DIRECTED.  ``real_vars`` lists symbols assumed real.
    """

    user_variable: str = "z"
    kind: str = FINITE
    value: ex.Expr = ex.ZERO
    real_vars: FrozenSet[str] = field(default_factory=frozenset)
    internal_variable: str = ""

    def __post_init__(self):
        if not self.internal_variable:
            object.__setattr__(self, "internal_variable", "z")

    # substitutions

    def user_in_internal(self) -> ex.Expr:
        """The user variable written in the internal variable."""
        z = ex.Sym(self.internal_variable)
        if self.kind == FINITE:
            return ex.add(z, self.value)
        if self.kind == FROM_LEFT:
            return ex.add(self.value, ex.neg(z))
        if self.kind == POS_INF:
            return ex.power(z, ex.MINUS_ONE)
        if self.kind == NEG_INF:
            return ex.neg(ex.power(z, ex.MINUS_ONE))
        return ex.mul(self.value, ex.power(z, ex.MINUS_ONE))

    @property
    def back_substitution(self) -> ex.Expr:
        """The internal variable written in the user variable."""
        w = ex.Sym(self.user_variable)
        if self.kind == FINITE:
            return ex.add(w, ex.neg(self.value))
        if self.kind == FROM_LEFT:
            return ex.add(self.value, ex.neg(w))
        if self.kind == POS_INF:
            return ex.power(w, ex.MINUS_ONE)
        if self.kind == NEG_INF:
            return ex.neg(ex.power(w, ex.MINUS_ONE))
        return ex.mul(self.value, ex.power(w, ex.MINUS_ONE))

    @property
    def at_infinity(self) -> bool:
        return self.kind in (POS_INF, NEG_INF, DIRECTED)

    @property
    def internal_positive(self) -> bool:
        """True when the internal variable approaches 0 through positive reals."""
        if self.kind == FROM_LEFT:
            return True
        if self.kind in (POS_INF, NEG_INF):
            return self.user_variable in self.real_vars
        return self.kind == FINITE and self.user_variable in self.real_vars

    def is_real(self, name: str) -> bool:
        return name in self.real_vars

    def point_text(self) -> str:
        if self.kind == POS_INF:
            return "inf"
        if self.kind == NEG_INF:
            return "-inf"
        if self.kind == DIRECTED:
            v = ex.to_text(self.value)
            return f"{v}*inf" if isinstance(self.value, (ex.Sym, ex.Num)) and "+" not in v \
                else f"({v})*inf"
        v = ex.to_text(self.value)
        return f"{v}-" if self.kind == FROM_LEFT else v

    # display helpers

    def display_power(self, q: Fraction):
        """(scalar coefficient, expression) with z^q == scalar * expression."""
        q = Fraction(q)
        w = ex.Sym(self.user_variable)
        if self.kind in (FINITE, FROM_LEFT):
            return C.ONE, ex.power(self.back_substitution, ex.num(q))
        if self.kind == POS_INF:
            return C.ONE, ex.power(w, ex.num(-q))
        if self.kind == NEG_INF:
            scale = C.coeff_pow(C.Coefficient.scalar(-1), q)
            return scale, ex.power(w, ex.num(-q))
        scale = C.coeff_pow(expr_to_coefficient(self.value), q)
        return scale, ex.power(w, ex.num(-q))

    def log_display(self) -> ex.Expr:
        """How ln z is rendered in the user variable."""
        if self.kind == POS_INF:
            return ex.neg(ex.ln(ex.Sym(self.user_variable)))
        return ex.ln(self.back_substitution)


def make_frame(variable: str = "z", point=0, *, from_left=False, real_vars=(),
               expr: Optional[ex.Expr] = None) -> ExpansionFrame:
    """Build a frame.  ``point`` is a number, an Expr, "inf", "-inf" or ("dir", d)."""
    real_vars = frozenset(real_vars)
    internal = "z"
    if expr is not None and variable != "z" and "z" in ex.free_symbols(expr):
        names = ex.free_symbols(expr)
        i = 0
        while f"z{i}" in names:
            i += 1
        internal = f"z{i}"
    if point == "inf":
        return ExpansionFrame(variable, POS_INF, ex.ZERO, real_vars, internal)
    if point == "-inf":
        return ExpansionFrame(variable, NEG_INF, ex.ZERO, real_vars, internal)
    if isinstance(point, tuple) and point[0] == "dir":
        d = ex.as_expr(point[1])
        return ExpansionFrame(variable, DIRECTED, d, real_vars, internal)
    value = ex.as_expr(point)
    kind = FROM_LEFT if from_left else FINITE
    return ExpansionFrame(variable, kind, value, real_vars, internal)


def to_internal(e: ex.Expr, frame: ExpansionFrame) -> ex.Expr:
    """Rewrite e so that the expansion point is internal variable = 0."""
    if frame.kind == FINITE and frame.value == ex.ZERO \
            and frame.user_variable == frame.internal_variable:
        return e
    return ex.substitute(e, {frame.user_variable: frame.user_in_internal()})


def from_internal(e: ex.Expr, frame: ExpansionFrame) -> ex.Expr:
    return ex.substitute(e, {frame.internal_variable: frame.back_substitution})
