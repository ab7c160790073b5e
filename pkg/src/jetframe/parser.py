"""Recursive-descent parser for scalar expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := base ('^' '-'? int)?
    base   := number | ident | call | '(' expr ')'
    call   := ('alpha' | 'beta' | 'alpha_x..' | 'beta_x..') '(' 'x' ')' | 'sqrt' '(' expr ')'

Identifiers are the coordinates ``x y p q``, the opaque ``f`` and its
partials ``f_yp``, the section function ``Q`` and partials ``Q_y``, the
radical ``s`` and the token ``generic`` (a synonym for ``f``).  Everything
the renderer prints parses back to the same canonical value.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, NamedTuple

from .errors import InvalidDirectionError, MalformedExpressionError, ParseError
from .expr import COORDS, FunctionAtom, ScalarExpr, const, coord, radical, s


class Token(NamedTuple):
    kind: str  # num, ident, op, end
    text: str
    line: int
    column: int


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        # keep line/column honest across newlines in the skipped whitespace
        for i in range(pos, m.start(m.lastindex)):
            if text[i] == "\n":
                line, line_start = line + 1, i + 1
        col = m.start(m.lastindex) - line_start + 1
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(Token("num", num, line, col))
        elif ident is not None:
            tokens.append(Token("ident", ident, line, col))
        elif op in "+-*/^()":
            tokens.append(Token("op", op, line, col))
        else:
            raise ParseError(f"unexpected character {op!r}", line, col)
        pos = m.end()
    tail = text[pos:]
    for ch in tail:
        if ch == "\n":
            line, line_start = line + 1, pos + 1
        pos += 1
    tokens.append(Token("end", "", line, len(text) - line_start + 1))
    return tokens


_CALLS = re.compile(r"(alpha|beta)(?:_(x+))?$")
_ATOM = re.compile(r"(f|Q)(?:_([xypq]+))?$")


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok: Token = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.column)

    def expect(self, text: str) -> Token:
        if self.tok.kind == "op" and self.tok.text == text:
            return self.advance()
        found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
        self.fail(f"expected {text!r}, found {found}")

    def at_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def parse(self) -> ScalarExpr:
        if self.tok.kind == "end":
            self.fail("empty expression")
        e = self.expr()
        if self.tok.kind != "end":
            self.fail(f"unexpected {self.tok.text!r}")
        return e

    def expr(self) -> ScalarExpr:
        e = self.term()
        while self.at_op("+", "-"):
            op = self.advance().text
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> ScalarExpr:
        e = self.unary()
        while self.at_op("*", "/"):
            op = self.advance()
            rhs = self.unary()
            if op.text == "*":
                e = e * rhs
            else:
                if rhs.is_zero():
                    self.fail("division by zero", op)
                e = e / rhs
        return e

    def unary(self) -> ScalarExpr:
        if self.at_op("-"):
            self.advance()
            return -self.unary()
        return self.factor()

    def factor(self) -> ScalarExpr:
        b = self.base()
        if self.at_op("^"):
            caret = self.advance()
            neg = False
            if self.at_op("-"):
                self.advance()
                neg = True
            if self.tok.kind != "num" or "." in self.tok.text:
                self.fail("exponent must be an integer")
            n = int(self.advance().text)
            if neg:
                if b.is_zero():
                    self.fail("division by zero", caret)
                n = -n
            b = b ** n
        return b

    def base(self) -> ScalarExpr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return const(Fraction(t.text))
        if self.at_op("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "ident":
            self.advance()
            return self.ident(t)
        if t.kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {t.text!r}")

    def ident(self, t: Token) -> ScalarExpr:
        name = t.text
        if name in COORDS:
            return coord(name)
        if name == "generic":
            return ScalarExpr.atom(FunctionAtom("F"))
        if name == "s":
            return s()
        if name == "sqrt":
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            try:
                return radical(arg)
            except MalformedExpressionError as exc:
                self.fail(str(exc), t)
        m = _CALLS.match(name)
        if m:
            head = "Alpha" if m.group(1) == "alpha" else "Beta"
            self.expect("(")
            arg = self.tok
            if arg.kind != "ident" or arg.text != "x":
                self.fail(f"{m.group(1)} takes only the argument x", arg)
            self.advance()
            self.expect(")")
            return ScalarExpr.atom(FunctionAtom(head, tuple(m.group(2) or "")))
        m = _ATOM.match(name)
        if m:
            head = "F" if m.group(1) == "f" else "Q"
            try:
                return ScalarExpr.atom(FunctionAtom(head, tuple(m.group(2) or "")))
            except InvalidDirectionError as exc:
                self.fail(str(exc), t)
        self.fail(f"unknown identifier {name!r}", t)


def parse(text: str) -> ScalarExpr:
    """Parse ``text`` into a canonical :class:`ScalarExpr`; raises :class:`ParseError`."""
    return _Parser(text).parse()
