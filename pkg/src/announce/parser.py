"""Recursive-descent parser for the formula language.

Grammar (whitespace insensitive)::

    formula := imp
    imp     := or ("->" imp)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | "K" IDENT unary | "Kh" IDENT unary
             | "[" formula "]" unary | "<" formula ">" unary
             | "[!]" unary | "<!>" unary
             | "[G" group "]" unary | "<G" group ">" unary
             | "[C" group "]" unary | "<C" group ">" unary
             | "true" | "false" | IDENT | "(" formula ")"
    group   := "{" (IDENT ("," IDENT)*)? "}"

Diamonds and ``Kh`` are desugared while parsing.
"""
from __future__ import annotations

import re

from .errors import FormulaSyntaxError, UnknownOperator
from .formula import (BOTTOM, TOP, AnnBox, And, ApalBox, Atom, CalBox, GalBox,
                      Imp, Know, Not, Or)

KEYWORDS = {"true", "false", "K", "Kh"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|\[!\]|<!>|[~&|()\[\]<>{},])
""", re.VERBOSE)


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            line, col = _linecol(text, pos)
            raise UnknownOperator(f"unexpected character {text[pos]!r}", line, col)
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


def _linecol(text, pos):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        line, col = _linecol(self.text, tok.pos)
        return FormulaSyntaxError(msg, line, col)

    def advance(self):
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, text):
        if self.tok.text != text or self.tok.kind == "ident":
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def ident(self, what):
        tok = self.tok
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise self.error(f"expected {what}, found {tok.text or 'end of input'!r}")
        self.advance()
        return tok.text

    # grammar

    def formula(self):
        return self.imp()

    def imp(self):
        left = self.disj()
        if self.tok.text == "->":
            self.advance()
            return Imp(left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.tok.text == "|":
            self.advance()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.tok.text == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def _group_follows(self):
        nxt = self.peek()
        return (nxt.kind == "ident" and nxt.text in ("G", "C")
                and self.peek(2).text == "{")

    def group(self):
        self.expect("{")
        names = []
        if self.tok.text != "}":
            names.append(self.ident("agent name"))
            while self.tok.text == ",":
                self.advance()
                names.append(self.ident("agent name"))
        self.expect("}")
        return frozenset(names)

    def unary(self):
        tok = self.tok
        t = tok.text
        if tok.kind == "op":
            if t == "~":
                self.advance()
                return Not(self.unary())
            if t == "(":
                self.advance()
                f = self.formula()
                self.expect(")")
                return f
            if t == "[!]":
                self.advance()
                return ApalBox(self.unary())
            if t == "<!>":
                self.advance()
                return Not(ApalBox(Not(self.unary())))
            if t in ("[", "<"):
                close = "]" if t == "[" else ">"
                box = t == "["
                if self._group_follows():
                    self.advance()
                    kind = self.advance().text
                    g = self.group()
                    self.expect(close)
                    ctor = GalBox if kind == "G" else CalBox
                    body = self.unary()
                    return ctor(g, body) if box else Not(ctor(g, Not(body)))
                self.advance()
                psi = self.formula()
                self.expect(close)
                body = self.unary()
                return AnnBox(psi, body) if box else Not(AnnBox(psi, Not(body)))
            raise self.error(f"unexpected {t!r}")
        if tok.kind == "ident":
            if t == "true":
                self.advance()
                return TOP
            if t == "false":
                self.advance()
                return BOTTOM
            if t in ("K", "Kh"):
                self.advance()
                a = self.ident("agent name")
                body = self.unary()
                return Know(a, body) if t == "K" else Not(Know(a, Not(body)))
            self.advance()
            return Atom(t)
        raise self.error("unexpected end of input")


def parse(text: str):
    """Parse ``text`` into a desugared formula tree."""
    p = _Parser(text)
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after formula")
    return f
