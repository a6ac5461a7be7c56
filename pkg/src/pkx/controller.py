"""Expansion driver: recursive as-requested expansion of an expression.

``Engine.series(e, k)`` returns a series correct through z^k: every term of
exponent <= k is present and right.  Operand requests start from the
dominant-exponent guesses and the operand-order table, are refined once an
operand reveals its dominant data, and otherwise grow by a doubling
increment.  Every result is checked against ``correct_to`` before it is
accepted, so the guesses only affect cost, never correctness.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from . import coeff as C
from . import expr as ex
from .arith import srs_add, srs_mul, srs_pow, srs_scale
from .convert import coefficient_to_expr, expr_to_coefficient
from .elemfun import KERNELS
from .display import series_json, series_json_obj, series_text
from .errors import EssentialSingularity, InsufficientOrder, PkxError, ResourceExhausted
from .frames import ExpansionFrame, make_frame, to_internal
from .parser import parse
from .rewrite import collect_exponentials, eval_at_zero
from .series import (BIG_O, INF, LITTLE_O, OrderTerm, SeriesRep, correct_to,
                     dominant_exponent, truncate, weaken_to)

LOWER = "lowerBound"
EXACT = "exact"
UPPER = "upperBound"
UNCERTAIN = "uncertain"

_COS_LIKE = {"cos", "cosh"}


@dataclass(frozen=True)
class GuessReport:
    value: Fraction
    status: str = UNCERTAIN

    def is_lower(self) -> bool:
        """The value is a guaranteed lower bound (exact counts)."""
        return self.status in (LOWER, EXACT)


def _is_value(e: ex.Expr, var: str, target: C.Coefficient) -> bool:
    v = eval_at_zero(e, var)
    return v.is_finite and C.coeff_equals(v.value, target)


def _has_log(e: ex.Expr, var: str) -> bool:
    if isinstance(e, ex.Apply):
        if e.func == "ln" and ex.depends_on(e.arg, var):
            return True
        return _has_log(e.arg, var)
    if isinstance(e, ex.Pow):
        if ex.depends_on(e.exp, var):
            return True
        return _has_log(e.base, var)
    if isinstance(e, (ex.Add, ex.Mul)):
        return any(_has_log(a, var) for a in e.args)
    return False


def _product_status(statuses):
    s = set(statuses)
    if s <= {EXACT}:
        return EXACT
    if s <= {EXACT, LOWER}:
        return LOWER
    if s <= {EXACT, UPPER}:
        return UPPER
    return UNCERTAIN


@lru_cache(maxsize=4096)
def guess_de(u: ex.Expr, var: str = "z") -> GuessReport:
    """Guessed dominant exponent with a status saying how far to trust it."""
    if not ex.depends_on(u, var):
        return GuessReport(Fraction(0), EXACT)
    if isinstance(u, ex.Sym):
        return GuessReport(Fraction(1), EXACT)
    if isinstance(u, ex.Add):
        gs = [guess_de(a, var) for a in u.args]
        status = LOWER if all(g.is_lower() for g in gs) else UNCERTAIN
        return GuessReport(min(g.value for g in gs), status)
    if isinstance(u, ex.Mul):
        gs = [guess_de(a, var) for a in u.args]
        return GuessReport(sum((g.value for g in gs), Fraction(0)),
                           _product_status(g.status for g in gs))
    if isinstance(u, ex.Pow):
        q = ex.rational_value(u.exp)
        if q is None:
            return GuessReport(Fraction(0), UNCERTAIN)
        g = guess_de(u.base, var)
        status = g.status
        if q < 0:
            status = {LOWER: UPPER, UPPER: LOWER}.get(status, status)
        return GuessReport(q * g.value, status)
    return _guess_apply(u.func, u.arg, var)


def _guess_apply(func, arg, var):
    g = guess_de(arg, var)
    if func == "exp":
        if g.is_lower() and g.value >= 0 and not _has_log(arg, var):
            return GuessReport(Fraction(0), EXACT)
        return GuessReport(Fraction(0), UNCERTAIN)
    if func in _COS_LIKE:
        if g.is_lower() and g.value > 0:
            return GuessReport(Fraction(0), EXACT)
        return GuessReport(Fraction(0), UNCERTAIN)
    if func == "ln":
        v = eval_at_zero(arg, var)
        if v.is_finite and C.coeff_equals(v.value, C.ONE):
            return guess_de(ex.add(arg, ex.MINUS_ONE), var)
        if v.kind == "infinite" or (v.is_finite and not _has_log(arg, var)):
            return GuessReport(Fraction(0), EXACT)
        return GuessReport(Fraction(0), UNCERTAIN)
    if func == "arctan":
        for unit, shift in ((C.I, ex.neg(ex.I)), (-C.I, ex.I)):
            if _is_value(arg, var, unit):
                return GuessReport(guess_de(ex.add(arg, shift), var).value, UNCERTAIN)
    if func in ("arccos", "arccosh"):
        if _is_value(arg, var, C.ONE):
            return GuessReport(guess_de(ex.add(arg, ex.MINUS_ONE), var).value / 2, UNCERTAIN)
        return GuessReport(Fraction(0), UNCERTAIN)
    # sin-like rows: max(0, guess)
    # reported as a bound only: composition can still cancel the leading term
    if g.value > 0:
        return GuessReport(g.value, LOWER if g.is_lower() else UNCERTAIN)
    return GuessReport(Fraction(0), LOWER if g.is_lower() and g.value == 0 else UNCERTAIN)


@lru_cache(maxsize=4096)
def _inc(u: ex.Expr, var: str) -> Fraction:
    """Guessed increment between the first two nonzero exponents (0: none)."""
    zero = Fraction(0)
    if not ex.depends_on(u, var) or isinstance(u, ex.Sym):
        return zero
    if isinstance(u, ex.Pow):
        if ex.rational_value(u.exp) is None:
            return _inc(ex.exp(ex.mul(u.exp, ex.ln(u.base))), var)
        return _inc(u.base, var)
    if isinstance(u, ex.Mul):
        incs = [i for i in (_inc(a, var) for a in u.args) if i]
        return min(incs) if incs else zero
    if isinstance(u, ex.Add):
        return _sum_inc(u, var)
    func, arg = u.func, u.arg
    a = guess_de(arg, var).value
    ia = _inc(arg, var)
    at0 = eval_at_zero(arg, var)
    unit = at0.value if at0.is_finite else None

    def at(*units):
        return unit is not None and any(C.coeff_equals(unit, x) for x in units)

    if func == "ln":
        return _inc(ex.add(arg, ex.MINUS_ONE), var) if at(C.ONE) else ia
    if func == "exp":
        return ia if a == 0 else abs(a)
    if func in ("sin", "sinh", "tan", "tanh"):
        return 2 * abs(a) if ia == 0 else ia
    if func in _COS_LIKE:
        return ia if a == 0 else 2 * abs(a)
    if func in ("arctan", "arctanh"):
        units = (C.I, -C.I) if func == "arctan" else (C.ONE, -C.ONE)
        if a < 0:
            return -a
        if a > 0 and ia == 0:
            return 2 * a
        if at(*units):
            return _inc(ex.add(arg, ex.neg(coefficient_to_expr(unit))), var)
        return ia
    if func in ("arcsin", "arcsinh"):
        units = (C.ONE, -C.ONE) if func == "arcsin" else (C.I, -C.I)
        if ia == 0:
            return 2 * abs(a)
        return ia / 2 if at(*units) else ia
    # arccos, arccosh
    if a > 0:
        return a
    if a < 0 and ia == 0:
        return -2 * a
    return ia / 2 if at(C.ONE, -C.ONE) else ia


def _sum_inc(s: ex.Add, var: str) -> Fraction:
    sigma = guess_de(s, var).value
    low = [a for a in s.args if guess_de(a, var).value == sigma]
    rest = [guess_de(a, var).value for a in s.args if guess_de(a, var).value != sigma]
    gamma = min(rest) if rest else Fraction(0)
    nonzero = [i for i in (_inc(a, var) for a in low) if i]
    delta = min(nonzero) if nonzero else Fraction(0)
    if not rest:
        return delta
    if not nonzero:
        return gamma - sigma
    return min(delta, gamma - sigma)


def guess_inc(u: ex.Expr, var: str = "z", top_level: bool = True) -> GuessReport:
    """Guessed exponent increment; a top-level 0 becomes 1."""
    value = _inc(u, var)
    if not ex.depends_on(u, var) or isinstance(u, ex.Sym):
        status = EXACT
    else:
        status = UNCERTAIN
    if top_level and value <= 0:
        return GuessReport(Fraction(1), UNCERTAIN)
    return GuessReport(value, status)


# operand orders

ESSENTIAL = "essential singularity"

_ENTIRE = {"exp", "cos", "cosh", "sin", "tan", "sinh", "tanh"}
_BRANCH_UNITS = {
    "arctan": (C.I, -C.I), "arcsinh": (C.I, -C.I),
    "arctanh": (C.ONE, -C.ONE), "arcsin": (C.ONE, -C.ONE),
    "arccos": (C.ONE, -C.ONE), "arccosh": (C.ONE, -C.ONE),
}


def required_operand_orders(op_kind: str, k, known: dict):
    """Operand orders giving a result correct through z^k.

    ``known`` holds whichever of alpha, beta, gamma, c and sigma the row
    needs.  Returns {"m": ...} or {"m": ..., "n": ...}, or ESSENTIAL.
    """
    k = Fraction(k)
    alpha = known.get("alpha")
    if op_kind in ("add", "sub"):
        return {"m": k, "n": k}
    if op_kind == "mul":
        return {"m": k - known["beta"], "n": k - alpha}
    if op_kind == "div":
        beta = known["beta"]
        return {"m": k + beta, "n": k - alpha + 2 * beta}
    if op_kind == "pow":
        return {"m": k + (1 - Fraction(known["gamma"])) * alpha}
    if op_kind in _ENTIRE:
        return {"m": k} if alpha >= 0 else ESSENTIAL
    if op_kind == "ln":
        return {"m": k + alpha}
    c, sigma = known.get("c"), known.get("sigma")
    branch = alpha == 0 and c is not None and any(
        C.coeff_equals(c, b) for b in _BRANCH_UNITS[op_kind])
    if branch:
        if sigma is None:
            return {"m": None}
        half = op_kind in ("arcsinh", "arcsin", "arccos", "arccosh")
        return {"m": k + (sigma / 2 if half else sigma)}
    if alpha < 0:
        factor = 2 if op_kind in ("arctan", "arctanh") else 1
        return {"m": k + factor * alpha}
    return {"m": k}


# budget and trace

DEFAULT_ITERATIONS = 24


def default_iterations() -> int:
    raw = os.environ.get("PKX_BUDGET")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            return DEFAULT_ITERATIONS
        if value > 0:
            return value
    return DEFAULT_ITERATIONS


@dataclass
class Budget:
    """Per-node iteration limit and the allowed requested-order span."""

    iterations: int = field(default_factory=default_iterations)
    span_scale: int = 4
    span_offset: int = 64

    def __post_init__(self):
        if self.iterations <= 0:
            raise ValueError("the iteration budget must be positive")

    def span(self, k) -> Fraction:
        return self.span_scale * abs(Fraction(k)) + self.span_offset


@dataclass
class Trace:
    """Counters describing the work done by one engine."""

    iterations: int = 0
    replans: int = 0
    cancellations: int = 0
    requests: int = 0
    max_requested: Optional[Fraction] = None
    coefficients: int = 0

    def request(self, k):
        self.requests += 1
        if self.max_requested is None or k > self.max_requested:
            self.max_requested = Fraction(k)


@dataclass(frozen=True)
class OrderRequest:
    k: Fraction
    budget: Budget = field(default_factory=Budget)


# the engine

class Engine:
    """Expands expressions in one internal variable, caching by node.

    A cached series is reused for any request it is correct for, so a node
    is recomputed only when a caller needs more than was computed before.
    """

    def __init__(self, var: str = "z", budget: Optional[Budget] = None,
                 trace: Optional[Trace] = None):
        self.var = var
        self.budget = budget or Budget()
        self.trace = trace or Trace()
        self._cache = {}

    # entry point

    def series(self, e: ex.Expr, k) -> SeriesRep:
        """A series for e correct through z^k (it may hold later terms too)."""
        k = Fraction(k)
        self.trace.request(k)
        for r in self._cache.get(e, ()):
            if correct_to(r, k):
                return r
        r = self._compute(e, k)
        if not correct_to(r, k):
            raise PkxError(f"internal error: {ex.to_text(e)} not determined through order {k}")
        self._cache.setdefault(e, []).append(r)
        self.trace.coefficients += len(r.coeffs)
        return r

    def _compute(self, e, k):
        var = self.var
        if not ex.depends_on(e, var):
            return SeriesRep.constant(expr_to_coefficient(e))
        if isinstance(e, ex.Sym):
            return SeriesRep.monomial(C.ONE, 1)
        if isinstance(e, ex.Add):
            return self._sum(e, k)
        if isinstance(e, ex.Mul):
            return self._product(e, k)
        if isinstance(e, ex.Pow):
            return self._power(e, k)
        return self._unary(e.func, e.arg, k, KERNELS[e.func])

    # sums

    def _sum(self, e, k):
        parts = [self.series(a, k) for a in e.args]
        total = parts[0]
        for p in parts[1:]:
            total = srs_add(total, p)
        lead = min(dominant_exponent(p) for p in parts)
        if lead != INF and dominant_exponent(total) > lead:
            # the leading terms cancelled: callers planned with a dominant
            # exponent that was too small, so this counts as a re-plan
            self.trace.cancellations += 1
            self.trace.iterations += 1
        return total

    # products

    def _product(self, e, k):
        var = self.var
        const = C.ONE
        factors = []
        for a in e.args:
            if ex.depends_on(a, var):
                factors.append(a)
            else:
                const = const * expr_to_coefficient(a)
        if len(factors) == 1:
            r = self.series(factors[0], k)
        else:
            pick = len(factors) - 1
            for i in range(len(factors) - 1, -1, -1):
                if guess_de(factors[i], var).status == EXACT:
                    pick = i
                    break
            v = factors[pick]
            u = ex.mul(*(f for i, f in enumerate(factors) if i != pick))
            U, V = self.product_operands(u, v, k)
            r = srs_mul(U, V, k)
        return srs_scale(r, const) if const != C.ONE else r

    def product_operands(self, u: ex.Expr, v: ex.Expr, k):
        """Series for u and v whose product is correct through z^k."""
        k = Fraction(k)
        var = self.var
        gu, gv = guess_de(u, var), guess_de(v, var)
        if gu.is_lower() and gv.is_lower() and gu.value + gv.value > k:
            # both guesses are guaranteed lower bounds: the product vanishes to order k
            return (SeriesRep.zero(OrderTerm(BIG_O, gu.value)),
                    SeriesRep.zero(OrderTerm(BIG_O, gv.value)))
        alpha, beta = gu.value, gv.value
        m = m0 = k - beta
        n = n0 = k - alpha
        du = dv = Fraction(-1)
        span = self.budget.span(k)
        for it in range(self.budget.iterations):
            if it:
                self.trace.iterations += 1
                if m - m0 > span or n - n0 > span:
                    break
            U = self.series(u, m)
            if U.is_zero() and U.is_exact:
                return U, SeriesRep.zero()
            if not U.is_zero():
                alpha = U.alpha
                n = k - alpha
                V = self.series(v, n)
                if V.is_zero():
                    return U, V
                need = k - V.alpha
                if m == need:
                    return U, V
                if m > need:
                    return truncate(U, need), V
                return self.series(u, need), V
            V = self.series(v, n)
            if V.is_zero() and V.is_exact:
                return SeriesRep.zero(), V
            if not V.is_zero():
                m = k - V.alpha
                U = self.series(u, m)
                if U.is_zero():
                    return U, V
                need = k - U.alpha
                if n == need:
                    return U, V
                if n > need:
                    return U, truncate(V, need)
                return U, self.series(v, need)
            if m + n >= k:
                return U, V
            du = self._next_increment(u, du)
            dv = self._next_increment(v, dv)
            m = min(m0 + du, k - n)
            n = min(n0 + dv, k - m)
        raise ResourceExhausted(
            f"no nonzero term found for {ex.to_text(u)} or {ex.to_text(v)} within the budget")

    def _next_increment(self, e, delta):
        if delta < 0:
            g = guess_inc(e, self.var, top_level=False).value
            return g if g > 0 else Fraction(1)
        return delta + delta

    # powers

    def _power(self, e, k):
        base, exponent = e.base, e.exp
        q = ex.rational_value(exponent)
        if q is None:
            return self.series(ex.exp(ex.mul(exponent, ex.ln(base))), k)
        if base == ex.Sym(self.var):
            return SeriesRep.monomial(C.ONE, q)
        return self._unary("pow", base, k, lambda U, kk: srs_pow(U, q, kk), gamma=q)

    # unary nodes

    def _unary(self, row, arg, k, kernel, gamma=None):
        var = self.var
        m0 = self._initial_request(row, arg, k, gamma)
        m = m0
        delta = None
        refines = 0
        span = self.budget.span(k)
        for it in range(self.budget.iterations):
            if it:
                self.trace.iterations += 1
                if m - m0 > span:
                    break
            U = self.series(arg, m)
            try:
                R = kernel(U, k)
            except InsufficientOrder:
                R = None
            except EssentialSingularity as err:
                if isinstance(err.subexpression, ex.Expr):
                    raise
                node = ex.apply(row, arg) if row in KERNELS else arg
                raise EssentialSingularity(
                    f"{ex.to_text(node)} has an essential singularity at the expansion point "
                    f"({err})", node) from None
            if R is not None and correct_to(R, k):
                return R
            refined = self._refine(row, k, U, R, m, gamma)
            if refined is not None and refined > m:
                if refines:
                    # a shrinking gap (3/2, 7/4, 15/8, ...) must not stall
                    refined = max(refined, m + guess_inc(arg, var).value)
                refines += 1
                m = refined
                continue
            delta = guess_inc(arg, var).value if delta is None else delta + delta
            step = m0 + delta
            m = step if step > m else m + delta
        label = ex.to_text(arg)
        raise ResourceExhausted(
            f"{row} of {label}: the argument did not reveal enough terms within the budget")

    def _initial_request(self, row, arg, k, gamma):
        g = guess_de(arg, self.var)
        alpha = g.value
        if row == "pow":
            return required_operand_orders("pow", k, {"alpha": alpha, "gamma": gamma})["m"]
        if row == "ln":
            return required_operand_orders("ln", k, {"alpha": alpha})["m"]
        if row in _ENTIRE:
            # the constant term decides everything, so ask for it at least
            return max(k, Fraction(0))
        at0 = eval_at_zero(arg, self.var)
        if at0.is_finite:
            c = at0.value
            known = {"alpha": Fraction(0) if c else max(alpha, Fraction(1)), "c": c}
            if c and any(C.coeff_equals(c, b) for b in _BRANCH_UNITS[row]):
                known["sigma"] = guess_de(ex.add(arg, ex.neg(coefficient_to_expr(c))),
                                          self.var).value
            m = required_operand_orders(row, k, known)["m"]
        elif alpha >= 0:
            m = k
        else:
            m = required_operand_orders(row, k, {"alpha": alpha})["m"]
        return max(m, Fraction(0)) if alpha >= 0 else m

    def _refine(self, row, k, U, R, m, gamma):
        """A better request from what the last attempt revealed, if any."""
        candidates = []
        if R is not None and R.order.nu != INF:
            # errors shift linearly with the operand's, so close the gap
            gap = k - R.order.nu
            if R.order.kind != LITTLE_O:
                gap += 1
            candidates.append(m + gap)
        if not U.is_zero():
            known = {"alpha": U.alpha, "c": U.coeffs[0], "gamma": gamma}
            if len(U.coeffs) > 1 or U.order.kind == "exact":
                rest = [e for e, _ in U.terms()[1:]]
                known["sigma"] = rest[0] if rest else INF
            if row in ("pow", "ln") or row in _BRANCH_UNITS:
                req = required_operand_orders(row, k, known)
                if req is not ESSENTIAL and req.get("m") is not None and req["m"] != INF:
                    candidates.append(req["m"])
        better = [c for c in candidates if c > m]
        return max(better) if better else None


# public entry points

@dataclass
class SeriesResult:
    """A series with the frame it is displayed in and the work it took."""

    series: SeriesRep
    frame: ExpansionFrame
    trace: Trace = field(default_factory=Trace)
    requested: Optional[Fraction] = None

    def text(self) -> str:
        return series_text(self.series, self.frame)

    def json_obj(self) -> dict:
        return series_json_obj(self.series, self.frame)

    def json(self) -> str:
        return series_json(self.series, self.frame)

    def __str__(self):
        return self.text()


def _as_frame(frame):
    return frame if frame is not None else make_frame("z", 0)


def prepare(u: Union[str, ex.Expr], frame: ExpansionFrame) -> ex.Expr:
    """Parse, collect exponentials, and move the expansion point to 0."""
    if isinstance(u, str):
        u = parse(u)
    u = collect_exponentials(u, frame.real_vars)
    return to_internal(u, frame)


def expand_expr(u: Union[str, ex.Expr], frame=None, k=0, budget: Optional[Budget] = None
                ) -> SeriesResult:
    """Every term through order k and nothing beyond, reported as o(.^k) unless exact."""
    frame = _as_frame(frame)
    k = Fraction(k)
    internal = prepare(u, frame)
    engine = Engine(frame.internal_variable, budget)
    s = weaken_to(engine.series(internal, k), k)
    return SeriesResult(s, frame, engine.trace, k)


def n_terms(u: Union[str, ex.Expr], frame=None, n: int = 1,
            budget: Optional[Budget] = None) -> SeriesResult:
    """The first n nonzero terms, or fewer when the expansion is exact."""
    if n < 1:
        raise ValueError("the number of terms must be positive")
    frame = _as_frame(frame)
    var = frame.internal_variable
    internal = prepare(u, frame)
    engine = Engine(var, budget)
    delta = guess_inc(internal, var).value
    k = guess_de(internal, var).value + (n - 1) * delta
    for _ in range(engine.budget.iterations):
        r = engine.series(internal, k)
        known = [e for e, _ in r.terms() if e <= k]
        if len(known) >= n:
            return SeriesResult(weaken_to(r, known[n - 1]), frame, engine.trace)
        if r.is_exact:
            return SeriesResult(r, frame, engine.trace)
        k += n * delta
        delta += delta
        engine.trace.iterations += 1
    raise ResourceExhausted(f"fewer than {n} nonzero terms found within the budget")


def dominant_term_of(u: Union[str, ex.Expr], frame=None,
                     budget: Optional[Budget] = None) -> SeriesResult:
    return n_terms(u, frame, 1, budget)
