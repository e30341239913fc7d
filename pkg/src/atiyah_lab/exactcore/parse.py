"""Parser for the polynomial text syntax used in problem files.

Grammar (no implicit multiplication)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | 'x' INT | '(' expr ')'
"""

import re
from fractions import Fraction

from ..errors import ParseError
from .poly import Poly

_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d+)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break  # trailing whitespace
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("var", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^/()":
                raise ParseError(f"unexpected character {ch!r}", text, start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, nvars):
        self.text = text
        self.nvars = nvars
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, self.text, tok[2])

    def expr(self):
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] == "*":
            self.take()
            value = value * self.unary()
        return value

    def unary(self):
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                self.fail("expected integer exponent")
            self.take()
            base = base ** int(tok[1])
        return base

    def atom(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "int":
            self.take()
            num = int(tok[1])
            if self.peek()[0] == "/":
                self.take()
                den_tok = self.peek()
                if den_tok[0] != "int":
                    self.fail("expected integer denominator")
                self.take()
                den = int(den_tok[1])
                if den == 0:
                    self.fail("zero denominator", den_tok)
                return Poly.const(self.nvars, Fraction(num, den))
            return Poly.const(self.nvars, num)
        if kind == "var":
            self.take()
            index = int(tok[1][1:])
            if not 1 <= index <= self.nvars:
                self.fail(f"variable {tok[1]} outside x1..x{self.nvars}", tok)
            return Poly.var(self.nvars, index - 1)
        if kind == "(":
            self.take()
            value = self.expr()
            if self.peek()[0] != ")":
                self.fail("expected ')'")
            self.take()
            return value
        if kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected token {tok[1]!r}")


def parse_poly(text: str, nvars: int) -> Poly:
    """Parse ``text`` as a polynomial in ``x1 .. x{nvars}``."""
    if not isinstance(text, str):
        raise ParseError("polynomial must be given as text", repr(text), 0)
    parser = _Parser(text, nvars)
    value = parser.expr()
    if parser.peek()[0] != "end":
        parser.fail("unexpected trailing input")
    return value


def parse_rational(text: str) -> Fraction:
    """Parse an exact rational ``p`` or ``p/q`` (optionally signed)."""
    m = re.fullmatch(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*", text)
    if m is None:
        raise ParseError("expected a rational of the form p or p/q", text, 0)
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError("zero denominator", text, m.start(2))
    return Fraction(int(m.group(1)), den)
