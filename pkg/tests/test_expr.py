import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import FUNCS, random_expr
from oracle import to_sympy
from pkx import coeff as C
from pkx import expr as ex
from pkx.errors import ParseError
from pkx.frames import from_internal, make_frame, to_internal
from pkx.parser import parse
from pkx.rewrite import collect_exponentials, diff, eval_at_zero

z, w, x = ex.Sym("z"), ex.Sym("w"), ex.Sym("x")


class TestParse:
    def test_quotient(self):
        assert parse("sin(z)/z^3") == ex.mul(ex.apply("sin", z), ex.power(z, -3))
        assert isinstance(parse("sin(z)/z^3"), ex.Mul)

    def test_collection_example(self):
        e = parse("exp(1/z)*(1+z^2)+sin(z)")
        assert e == ex.add(ex.mul(ex.exp(ex.power(z, -1)), ex.add(1, ex.power(z, 2))),
                           ex.apply("sin", z))

    def test_truncated_input(self):
        with pytest.raises(ParseError) as info:
            parse("1+")
        assert info.value.position == 2 and info.value.expected

    def test_imaginary_unit(self):
        assert parse("I") == ex.I
        assert parse("I*I") == ex.num(-1)

    def test_power_is_right_associative(self):
        assert parse("z^2^3") == ex.power(z, 8)

    def test_unary_minus_binds_looser_than_power(self):
        assert parse("-z^2") == ex.neg(ex.power(z, 2))

    def test_sqrt_is_half_power(self):
        assert parse("sqrt(z)") == ex.power(z, F(1, 2))

    def test_rational_literals(self):
        assert parse("3/6") == ex.num(F(1, 2))

    @pytest.mark.parametrize("text", ["sin(", "foo(z)", "z**2", ")", "2 3"])
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse(text)


class TestPrint:
    def test_negative_power(self):
        assert ex.to_text(ex.power(z, -3)) == "z^(-3)"

    def test_imaginary_unit(self):
        assert ex.to_text(ex.I) == "I"

    def test_sums_are_ordered(self):
        assert ex.to_text(parse("sin(z) + z + 1")) == ex.to_text(parse("1 + sin(z) + z"))

    def test_json_round_trip(self):
        e = parse("arcsin(ln(z)) + I*z^(1/2)")
        assert ex.from_json_obj(ex.to_json_obj(e)) == e


def _expressions(seed, n, depth=4):
    rng = random.Random(seed)
    return [random_expr(rng, depth) for _ in range(n)]


@pytest.mark.parametrize("e", _expressions(1, 150), ids=lambda e: ex.to_text(e)[:40])
def test_print_parse_round_trip(e):
    assert parse(ex.to_text(e)) == e


class TestFrames:
    def test_finite_shift(self):
        f = make_frame("w", parse("2*pi"))
        assert to_internal(parse("sin(w)"), f) == parse("sin(z + 2*pi)")

    def test_directed_infinity(self):
        f = make_frame("w", ("dir", ex.I))
        assert to_internal(parse("1/w"), f) == ex.mul(ex.num(C.GaussianRational(0, -1)), z)

    def test_positive_infinity(self):
        f = make_frame("w", "inf")
        assert to_internal(parse("exp(w)"), f) == parse("exp(1/z)")

    def test_from_left(self):
        f = make_frame("w", 1, from_left=True)
        assert to_internal(parse("w"), f) == parse("1 - z")
        assert f.internal_positive

    def test_internal_name_avoids_clash(self):
        e = parse("w + z")
        f = make_frame("w", 0, expr=e)
        assert f.internal_variable != "z"

    @pytest.mark.parametrize("point", [3, F(-1, 2), "inf", "-inf", ("dir", ex.I), ("dir", -1)])
    def test_back_substitution_inverts(self, point):
        f = make_frame("w", point)
        e = parse("w^3 - 2*w + 1/(w + 7) + exp(w/5)")
        back = from_internal(to_internal(e, f), f)
        W = sympy.Symbol("w")
        diff_ = to_sympy(back, "w") - to_sympy(e, "w")
        for value in (F(1, 3), F(2), F(-5, 7)):
            assert sympy.simplify(diff_.subs(W, sympy.Rational(value.numerator, value.denominator))) == 0


class TestCollect:
    def test_quotient(self):
        e = parse("exp(1/sin(z))/exp(cos(z)/sin(z))")
        assert collect_exponentials(e) == ex.exp(parse("1/sin(z) - cos(z)/sin(z)"))

    def test_power_with_real_exponent(self):
        e = parse("(exp(1/x))^sin(x)")
        assert collect_exponentials(e, ["x"]) == ex.exp(parse("sin(x)/x"))

    def test_power_without_realness_is_unchanged(self):
        e = parse("(exp(1/x))^sin(x)")
        assert collect_exponentials(e) == e

    def test_product(self):
        assert collect_exponentials(parse("exp(z)*exp(z^2)*3")) == parse("3*exp(z + z^2)")

    @pytest.mark.parametrize("e", _expressions(2, 60), ids=lambda e: ex.to_text(e)[:40])
    def test_idempotent(self, e):
        once = collect_exponentials(e, ["z"])
        assert collect_exponentials(once, ["z"]) == once

    @pytest.mark.parametrize("text", ["exp(z)*exp(2*z)/exp(z^2)", "exp(z)^3*exp(1/z)",
                                      "exp(sin(z))^2/exp(z)"])
    def test_value_preserved(self, text):
        e = parse(text)
        Z = sympy.Symbol("z")
        d = to_sympy(collect_exponentials(e, ["z"])) - to_sympy(e)
        for value in (sympy.Rational(1, 3), sympy.Rational(5, 2)):
            assert sympy.simplify(d.subs(Z, value)) == 0


class TestEvalAtZero:
    def test_exp(self):
        v = eval_at_zero(parse("exp(z)"))
        assert v.is_finite and v.value == C.ONE

    def test_pole(self):
        assert eval_at_zero(parse("1/z")).kind == "infinite"

    def test_log_reaching_branch_limited_function(self):
        assert eval_at_zero(parse("arcsin(ln(z))")).kind == "indeterminate"

    def test_log(self):
        assert eval_at_zero(parse("ln(z)")).kind == "infinite"

    def test_constant_function_value(self):
        v = eval_at_zero(parse("cos(z) + 2"))
        assert v.is_finite and v.value == C.coerce(3)

    def test_infinite_difference(self):
        assert eval_at_zero(parse("1/z - 1/z^2")).kind == "indeterminate"


class TestDiff:
    def test_sin(self):
        assert diff(parse("sin(z)"), "z") == parse("cos(z)")

    def test_log(self):
        assert diff(parse("ln(z)"), "z") == parse("1/z")

    def test_power_rule(self):
        assert diff(parse("z^(5/2)"), "z") == parse("5/2*z^(3/2)")

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(-9, 9), min_size=1, max_size=6))
    def test_polynomials(self, coeffs):
        p = ex.add(*(ex.mul(c, ex.power(z, j)) for j, c in enumerate(coeffs)))
        want = ex.add(*(ex.mul(c * j, ex.power(z, j - 1)) for j, c in enumerate(coeffs) if j))
        assert diff(p, "z") == want

    @pytest.mark.parametrize("name", FUNCS)
    def test_against_sympy(self, name):
        e = parse(f"{name}(z^2 + 3*z + 2)")
        assert sympy.simplify(to_sympy(diff(e, "z")) - sympy.diff(to_sympy(e), sympy.Symbol("z"))) == 0
