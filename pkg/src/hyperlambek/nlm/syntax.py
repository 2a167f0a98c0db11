"""Text syntax for NL♦ formulas, databases and sequents.

    formula  := unary (BINOP unary)*          binary operators are left-associative
    unary    := '<>'j unary | '[]'j unary | ATOM | '(' formula ')'
    database := '(' database ',' database ')' '^' i | '<' database '>' '^' j | formula
    sequent  := database '->' formula

BINOP is ``*i``, ``\\i`` or ``/i`` with the mode name written directly after
the operator, e.g. ``p *x q``, ``q \\c p``, ``[]j <>j p``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .terms import (Angle, Atom, Box, Database, Diamond, Formula, Leaf, NLMSequent, Over, Pair,
                    Prod, Under)

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->|→)
  | (?P<dia><>|◇)(?P<dia_i>\w+)
  | (?P<box>\[\]|□)(?P<box_i>\w+)
  | (?P<op>[*\\/•])(?P<op_i>\w+)
  | (?P<caret>\^)\s*(?P<caret_i>\w+)
  | (?P<ident>\w+)
  | (?P<punct>[(),<>])
""", re.VERBOSE)


class ParseError(ValueError):
    def __init__(self, message: str, text: str, offset: int) -> None:
        line = text.count("\n", 0, offset) + 1
        col = offset - (text.rfind("\n", 0, offset) + 1) + 1
        super().__init__(f"line {line}, column {col}: {message}")
        self.line, self.col = line, col


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    index: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind.endswith("_i"):
            kind = kind[:-2]
        if kind != "ws":
            idx = m.group(f"{kind}_i") if kind in ("dia", "box", "op", "caret") else ""
            out.append(_Tok(kind, m.group(kind), idx or "", m.start()))
        pos = m.end()
    out.append(_Tok("eof", "", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, msg: str) -> ParseError:
        return ParseError(msg, self.text, self.tok.pos)

    def punct(self, ch: str) -> bool:
        if self.tok.kind == "punct" and self.tok.value == ch:
            self.i += 1
            return True
        return False

    def expect(self, ch: str) -> None:
        if not self.punct(ch):
            raise self.fail(f"expected {ch!r}")

    def caret(self) -> str:
        if self.tok.kind != "caret":
            raise self.fail("expected '^index'")
        idx = self.tok.index
        self.i += 1
        return idx

    def formula(self) -> Formula:
        left = self.unary()
        while self.tok.kind == "op":
            op, mode = self.tok.value, self.tok.index
            self.i += 1
            right = self.unary()
            if op in "*•":
                left = Prod(mode, left, right)
            elif op == "\\":
                left = Under(mode, left, right)
            else:
                left = Over(mode, left, right)
        return left

    def unary(self) -> Formula:
        t = self.tok
        if t.kind in ("dia", "box"):
            self.i += 1
            body = self.unary()
            return Diamond(t.index, body) if t.kind == "dia" else Box(t.index, body)
        if t.kind == "ident":
            self.i += 1
            return Atom(t.value)
        if self.punct("("):
            A = self.formula()
            self.expect(")")
            return A
        raise self.fail("expected a formula")

    def database(self) -> Database:
        start = self.i
        if self.punct("("):
            try:
                left = self.database()
                if self.punct(","):
                    right = self.database()
                    self.expect(")")
                    return Pair(self.caret(), left, right)
            except ParseError:
                pass
            self.i = start
        elif self.punct("<"):
            body = self.database()
            self.expect(">")
            return Angle(self.caret(), body)
        return Leaf(self.formula())

    def done(self) -> None:
        if self.tok.kind != "eof":
            raise self.fail(f"unexpected {self.tok.value!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    A = p.formula()
    p.done()
    return A


def parse_database(text: str) -> Database:
    p = _Parser(text)
    d = p.database()
    p.done()
    return d


def parse_sequent(text: str) -> NLMSequent:
    p = _Parser(text)
    d = p.database()
    if p.tok.kind != "arrow":
        raise p.fail("expected '->'")
    p.i += 1
    A = p.formula()
    p.done()
    return NLMSequent(d, A)
