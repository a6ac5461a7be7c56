import io
import json
from fractions import Fraction as F

import jsonschema
import pytest

from corpus import corpus
from pkx import expr as ex
from pkx.cli import run
from pkx.controller import expand_expr
from pkx.parser import parse

RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
SCHEMA = {
    "type": "object",
    "required": ["variable", "point", "terms", "order"],
    "properties": {
        "variable": {"type": "string"},
        "point": {"type": "string"},
        "local": {"type": "string"},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["exponent", "coefficient"],
                "additionalProperties": False,
                "properties": {"exponent": RATIONAL, "coefficient": {"type": "string"}},
            },
        },
        "order": {
            "type": "object",
            "required": ["kind", "exponent"],
            "properties": {
                "kind": {"enum": ["o", "O", "Theta", "exact"]},
                "exponent": {"anyOf": [RATIONAL, {"const": "inf"}]},
            },
        },
    },
}

HARD = "1/(sin(z)-z+z^3/6-z^5/120+z^7/5040)"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


class TestExitCodes:
    def test_ok(self):
        code, out, _ = call("expand", "sin(z)/z^3", "--order", "2")
        assert code == 0
        assert out.strip() == "z^(-2) - 1/6 + z^2/120 + o(z^2)"

    @pytest.mark.parametrize("argv", [
        ("expand", "sin(", "--order", "1"),
        ("expand", "z", "--order", "x"),
        ("nterms", "z", "--terms", "0"),
        ("expand", "z"),
        ("frobnicate",),
    ])
    def test_usage(self, argv):
        assert call(*argv)[0] == 2

    def test_essential_singularity(self):
        code, _, err = call("expand", "exp(1/z)", "--order", "1")
        assert code == 3 and "EssentialSingularity" in err

    def test_budget(self):
        assert call("--budget", "1", "expand", HARD, "--order", "0")[0] == 4
        assert call("expand", HARD, "--order", "0")[0] == 0

    def test_budget_from_environment(self, monkeypatch):
        monkeypatch.setenv("PKX_BUDGET", "1")
        assert call("expand", HARD, "--order", "0")[0] == 4

    @pytest.mark.parametrize("text", ["ln(ln(z))", "1/(z-z)"])
    def test_other_math_errors(self, text):
        assert call("expand", text, "--order", "1")[0] == 5


class TestFormats:
    def test_json_fields(self):
        code, out, _ = call("expand", "tan(w)", "--var", "w", "--at", "pi/2",
                            "--order", "1", "--format", "json")
        obj = json.loads(out)
        jsonschema.validate(obj, SCHEMA)
        assert obj["variable"] == "w" and obj["local"] == "w - 1/2*pi"
        assert obj["terms"] == [{"exponent": "-1", "coefficient": "-1"},
                                {"exponent": "1", "coefficient": "1/3"}]
        assert obj["order"] == {"kind": "o", "exponent": "1"}

    def test_exact_result(self):
        obj = json.loads(call("expand", "sqrt(w)", "--var", "w", "--order", "1",
                              "--format", "json")[1])
        assert obj["order"] == {"kind": "exact", "exponent": "inf"}

    def test_extreme_orders(self):
        obj = json.loads(call("expand", "exp(z)/z^1000", "--order", "-999", "--format", "json")[1])
        assert [t["exponent"] for t in obj["terms"]] == ["-1000", "-999"]
        code, out, _ = call("nterms", "exp(z^(1/1000))", "--terms", "2")
        assert out.strip() == "1 + z^(1/1000) + o(z^(1/1000))"
        assert call("expand", "z", "--order", "1/1000")[0] == 0


class TestPoints:
    def test_directed_infinity(self):
        code, out, _ = call("dominant", "1/w", "--var", "w", "--at", "I*inf")
        assert code == 0 and out.startswith("w^(-1)")

    def test_from_left(self):
        code, out, _ = call("expand", "sqrt(1-w)", "--var", "w", "--at", "1",
                            "--from-left", "--order", "2")
        assert code == 0 and out.startswith("(-w + 1)^(1/2)")

    def test_real_variables_enable_collection(self):
        argv = ("expand", "(exp(1/x))^sin(x)", "--var", "x", "--order", "1")
        assert call(*argv, "--real", "x")[0] == 0

    def test_shifted_point(self):
        code, out, _ = call("expand", "sin(w)", "--var", "w", "--at", "2*pi", "--order", "3")
        assert out.strip() == "(w - 2*pi) - (w - 2*pi)^3/6 + o((w - 2*pi)^3)"


class TestBatch:
    def test_failing_line_continues(self, tmp_path):
        f = tmp_path / "in.txt"
        f.write_text("sin(z)\n# comment\n\nexp(1/z)\nsin(\ncos(z)\n")
        code, out, _ = call("batch", str(f), "--order", "2")
        rows = [json.loads(line) for line in out.splitlines()]
        assert [r["line"] for r in rows] == [1, 4, 5, 6]
        assert rows[1]["error"] == "EssentialSingularity" and rows[1]["exit_code"] == 3
        assert rows[2]["exit_code"] == 2
        for r in (rows[0], rows[3]):
            jsonschema.validate(r["result"], SCHEMA)
        # the worst failure decides the exit status
        assert code == 3

    def test_terms_mode(self, tmp_path):
        f = tmp_path / "in.txt"
        f.write_text("exp(z)\n")
        code, out, _ = call("batch", str(f), "--terms", "2")
        assert code == 0 and len(json.loads(out)["result"]["terms"]) == 2

    def test_missing_file(self, tmp_path):
        assert call("batch", str(tmp_path / "nope"), "--order", "1")[0] == 2


CASES = [ex.to_text(e) for e in corpus(60, seed=7)]


@pytest.mark.parametrize("text", CASES, ids=lambda t: t[:40])
def test_json_validates(text):
    code, out, _ = call("expand", text, "--order", "2", "--format", "json")
    if code == 0:
        jsonschema.validate(json.loads(out), SCHEMA)
    else:
        assert not out


def _polynomial_part(text):
    head, sep, _ = text.rpartition(" + ")
    assert sep, text
    return head


@pytest.mark.parametrize("text", CASES, ids=lambda t: t[:40])
def test_text_output_reparses(text):
    code, out, _ = call("expand", text, "--order", "2")
    if code != 0:
        return
    first = expand_expr(text, None, 2).series
    if first.is_zero():
        return
    again = expand_expr(parse(_polynomial_part(out.strip())), None, 2).series
    assert again.same_terms(first)
