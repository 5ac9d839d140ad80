"""Parser for the exact expression grammar used in problem files and the CLI.

Grammar (whitespace insignificant):

    expr   :=  term (('+'|'-') term)*
    term   :=  unary (('*'|'/') unary)*
    unary  :=  ('-'|'+') unary | power
    power  :=  atom ('^' nonneg-int)?
    atom   :=  integer | identifier | psi_<int>_<int> | '(' expr ')'

Identifiers match [a-zA-Z][a-zA-Z0-9]* (no underscores), so the psi_i_j form
is unambiguous.  Division requires the divisor to be certified nonzero: a
nonzero constant or a product of declared-nonzero factors.  The printers on
Polynomial and Scalar emit this same grammar, and parse(print(x)) == x.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ExprSyntaxError, UndeclaredVariableError
from .scalars import EMPTY_FACTS, NonzeroFacts, Scalar, Variable

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<psi>psi_(?P<pi>\d+)_(?P<pj>\d+))"
    r"|(?P<int>\d+)"
    r"|(?P<ident>[a-zA-Z][a-zA-Z0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


@dataclass(frozen=True)
class ParseContext:
    """Variable declarations governing which identifiers may appear."""

    dim: int | None = None
    params: frozenset = frozenset()
    facts: NonzeroFacts = field(default_factory=lambda: EMPTY_FACTS)
    allow_psi: bool = True

    @staticmethod
    def for_problem(dim, param_names=(), facts=EMPTY_FACTS, allow_psi=True):
        return ParseContext(dim=dim, params=frozenset(param_names),
                            facts=facts, allow_psi=allow_psi)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_at = len(text) - len(stripped)
            raise ExprSyntaxError(f"unexpected character '{text[bad_at]}'", bad_at)
        if m.group("psi"):
            tokens.append(("psi", (int(m.group("pi")), int(m.group("pj"))), m.start("psi")))
        elif m.group("int"):
            tokens.append(("int", int(m.group("int")), m.start("int")))
        elif m.group("ident"):
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        elif m.group("op"):
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, context):
        self.tokens = tokens
        self.idx = 0
        self.ctx = context

    def peek(self):
        return self.tokens[self.idx]

    def advance(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect_op(self, op):
        kind, value, pos = self.peek()
        if kind != "op" or value != op:
            raise ExprSyntaxError(f"expected '{op}'", pos)
        return self.advance()

    # -- grammar ------------------------------------------------------------

    def expr(self):
        value = self.term()
        while True:
            kind, val, _pos = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                rhs = self.term()
                value = value.add(rhs) if val == "+" else value.sub(rhs)
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.advance()
                rhs = self.unary()
                if val == "*":
                    value = value.mul(rhs)
                else:
                    value = value.div(rhs, self.ctx.facts)
            else:
                return value

    def unary(self):
        kind, val, _pos = self.peek()
        if kind == "op" and val in "+-":
            self.advance()
            inner = self.unary()
            return inner if val == "+" else inner.neg()
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _pos = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            ekind, evalue, epos = self.advance()
            if ekind != "int":
                raise ExprSyntaxError("exponent must be a nonnegative integer", epos)
            return base.pow(evalue)
        return base

    def atom(self):
        kind, val, pos = self.advance()
        if kind == "int":
            return Scalar.rational(val)
        if kind == "psi":
            i, j = val
            if not self.ctx.allow_psi:
                raise UndeclaredVariableError(f"psi_{i}_{j}", pos)
            if self.ctx.dim is not None and not (1 <= i <= self.ctx.dim and 1 <= j <= self.ctx.dim):
                raise UndeclaredVariableError(f"psi_{i}_{j}", pos)
            return Scalar.variable(Variable.psi(i, j))
        if kind == "ident":
            if val not in self.ctx.params:
                raise UndeclaredVariableError(val, pos)
            return Scalar.variable(Variable.param(val))
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ExprSyntaxError("expected a number, variable, or '('", pos)


def parse_scalar(text, context=ParseContext()):
    """Parse an expression string into a canonical Scalar."""
    tokens = _tokenize(text)
    parser = _Parser(tokens, context)
    value = parser.expr()
    kind, _val, pos = parser.peek()
    if kind != "end":
        raise ExprSyntaxError("trailing input", pos)
    return value


def parse_polynomial(text, context=ParseContext()):
    """Parse an expression that must denote a polynomial (denominator 1 or
    a rational constant)."""
    s = parse_scalar(text, context)
    if not s.is_polynomial():
        raise ExprSyntaxError("expected a polynomial expression", 0)
    return s.num


def print_scalar(s):
    """Canonical printing; inverse of parse_scalar on values."""
    return str(s)
