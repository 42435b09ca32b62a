"""Concrete syntax: parsing and minimal-parenthesis printing.

Grammar (loosest to tightest binding)::

    sum    := par ("+" par)*
    par    := merge ("|" merge)*          left-associative
    merge  := unary ("|/" unary)*         left-associative
    unary  := "0" | var | action "." unary | action
            | "@" visible "." unary | "(" sum ")"
    action := "tau" | name | "~" name

A bare action with no ``.`` continuation abbreviates ``action.0`` (the usual
convention of omitting trailing ``0``); identifiers listed in
``variables`` are read as variables instead.
"""
from __future__ import annotations

import re
from collections.abc import Collection

from .terms import (NIL, TAU, HMerge, Nil, Par, Prefix, Started, Sum, Term, Var,
                    action_name, plus)

__all__ = ["ParseError", "parse", "parse_process", "render", "parse_file"]


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}: {text!r}")
        self.text = text
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\|/)|([|+().@~0])|([a-z][a-z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError("unexpected character", text, pos + len(text[pos:]) - len(text[pos:].lstrip()))
        tok = m.group(1) or m.group(2) or m.group(3)
        tokens.append((tok, m.start(m.lastindex)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet: Collection[str] | None,
                 variables: Collection[str]):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.alphabet = None if alphabet is None else set(alphabet)
        self.variables = set(variables)

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def where(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def error(self, message: str):
        raise ParseError(message, self.text, self.where())

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            self.error(f"expected {expected!r}" if expected else "unexpected end of input")
        if expected is not None and tok != expected:
            self.error(f"expected {expected!r}, found {tok!r}")
        self.i += 1
        return tok

    def sum(self) -> Term:
        terms = [self.par()]
        while self.peek() == "+":
            self.take()
            terms.append(self.par())
        if len(terms) == 1:
            return terms[0]
        for t in terms:
            if not t.process:
                self.error("states cannot be summed")
        return plus(*terms)

    def par(self) -> Term:
        t = self.merge()
        while self.peek() == "|":
            self.take()
            t = Par(t, self.merge())
        return t

    def merge(self) -> Term:
        t = self.unary()
        while self.peek() == "|/":
            at = self.where()
            self.take()
            rhs = self.unary()
            if not (t.process and rhs.process):
                raise ParseError("merge arguments must be processes", self.text, at)
            t = HMerge(t, rhs)
        return t

    def name(self) -> str:
        tok = self.peek()
        if tok is None or not tok[0].isalpha() or tok == TAU:
            self.error("expected a name")
        if self.alphabet is not None and tok not in self.alphabet:
            self.error(f"name {tok!r} is not in the alphabet")
        self.take()
        return tok

    def body(self) -> Term:
        t = self.unary()
        if not t.process:
            self.error("a prefix body must be a process")
        return t

    def unary(self) -> Term:
        tok = self.peek()
        if tok == "0":
            self.take()
            return NIL
        if tok == "(":
            self.take()
            t = self.sum()
            self.take(")")
            return t
        if tok == "@":
            self.take()
            action = self.visible()
            self.take(".")
            return Started(action, self.body())
        if tok == "~" or tok == TAU:
            action = self.visible() if tok == "~" else self.take()
        elif tok is not None and tok[0].isalpha():
            if tok in self.variables:
                self.take()
                return Var(tok)
            action = self.visible()
        else:
            self.error("expected a term")
        if self.peek() == ".":
            self.take()
            return Prefix(action, self.body())
        return Prefix(action, NIL)

    def visible(self) -> str:
        if self.peek() == "~":
            self.take()
            return "~" + self.name()
        return self.name()


def parse(text: str, alphabet: Collection[str] | None = None,
          variables: Collection[str] = ()) -> Term:
    """Parse a process or state.  The result is in canonical form."""
    p = _Parser(text, alphabet, variables)
    if p.peek() is None:
        p.error("empty input")
    t = p.sum()
    if p.peek() is not None:
        p.error(f"unexpected {p.peek()!r}")
    return t


def parse_process(text: str, alphabet: Collection[str] | None = None,
                  variables: Collection[str] = ()) -> Term:
    t = parse(text, alphabet, variables)
    if not t.process:
        raise ParseError("expected a process, found a state", text, 0)
    return t


def parse_file(path, alphabet=None) -> list[Term]:
    """One term per line; blank lines and ``#`` comments are skipped."""
    terms = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                terms.append(parse(line, alphabet))
    return terms


# ---------------------------------------------------------------- printing

_SUM, _PAR, _MERGE, _UNARY = range(4)


def _level(t: Term) -> int:
    if isinstance(t, Sum):
        return _SUM
    if isinstance(t, Par):
        return _PAR
    if isinstance(t, HMerge):
        return _MERGE
    return _UNARY


def _wrap(t: Term, need: int, strict: bool = False) -> str:
    s = render(t)
    lvl = _level(t)
    if lvl < need or (strict and lvl == need):
        return f"({s})"
    return s


def render(t: Term) -> str:
    if isinstance(t, Nil):
        return "0"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Prefix):
        return f"{t.action}.{_wrap(t.body, _UNARY)}"
    if isinstance(t, Started):
        return f"@{t.action}.{_wrap(t.body, _UNARY)}"
    if isinstance(t, Sum):
        return " + ".join(_wrap(s, _PAR, strict=False) if not isinstance(s, Sum)
                          else f"({render(s)})" for s in t.summands)
    if isinstance(t, Par):
        return f"{_wrap(t.left, _PAR)} | {_wrap(t.right, _PAR, strict=True)}"
    if isinstance(t, HMerge):
        return f"{_wrap(t.left, _MERGE)} |/ {_wrap(t.right, _MERGE, strict=True)}"
    return t.render() if hasattr(t, "render") else repr(t)


def names(t: Term) -> set[str]:
    """Names occurring in the actions of ``t``."""
    out = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, (Prefix, Started)) and u.action != TAU:
            out.add(action_name(u.action))
        stack.extend(u.children)
    return out
