"""Recursive-descent parser for the expression grammar.

    expr    := term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := ('-')* power
    power   := primary ('^' factor)?
    primary := rational | 'I' | symbol | function '(' expr ')' | '(' expr ')'

``sqrt(x)`` is accepted as sugar for ``x^(1/2)``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import expr as ex
from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        kind, value, pos = self.peek()
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {found}", pos, tuple(expected))

    def expect_op(self, op):
        kind, value, _ = self.peek()
        if kind == "op" and value == op:
            return self.take()
        self.fail([op])

    def is_op(self, *ops):
        kind, value, _ = self.peek()
        return kind == "op" and value in ops

    def parse(self):
        e = self.expr()
        if self.peek()[0] != "end":
            self.fail(["+", "-", "*", "/", "^", "end of input"])
        return e

    def expr(self):
        e = self.term()
        while self.is_op("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            e = ex.add(e, rhs if op == "+" else ex.neg(rhs))
        return e

    def term(self):
        e = self.factor()
        while self.is_op("*", "/"):
            op = self.take()[1]
            rhs = self.factor()
            e = ex.mul(e, rhs) if op == "*" else ex.mul(e, ex.power(rhs, ex.MINUS_ONE))
        return e

    def factor(self):
        negations = 0
        while self.is_op("-"):
            self.take()
            negations += 1
        e = self.power()
        return ex.neg(e) if negations % 2 else e

    def power(self):
        base = self.primary()
        if self.is_op("^"):
            self.take()
            return ex.power(base, self.factor())
        return base

    def primary(self):
        kind, value, pos = self.peek()
        if kind == "int":
            self.take()
            return ex.num(int(value))
        if kind == "name":
            self.take()
            if value == "I":
                return ex.I
            if value in ex.FUNCTIONS or value == "sqrt":
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                if value == "sqrt":
                    return ex.power(arg, ex.num(Fraction(1, 2)))
                return ex.apply(value, arg)
            return ex.Sym(value)
        if kind == "op" and value == "(":
            self.take()
            e = self.expr()
            self.expect_op(")")
            return e
        self.fail(["number", "symbol", "function", "I", "("])


def parse(text: str) -> ex.Expr:
    """Parse text into a canonical expression; raises ParseError."""
    return _Parser(text).parse()
