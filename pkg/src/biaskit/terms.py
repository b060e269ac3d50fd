"""Bias terms: syntax tree, parser and printer.

Grammar (whitespace ignored)::

    term  := add
    add   := sd ('+' sd)*          skew addition, left associative
    sd    := mul ('~' mul)*        skew difference, left associative
    mul   := unary ('*' unary)*
    unary := atom ("'" | '^' int)*
    atom  := '0' | ident | '(' term ')' | ('d' | 'r') '(' term ')'
    ident := [a-z][a-z0-9]*

``d(t)`` and ``r(t)`` expand to ``t'*t`` and ``t*t'``; ``t^k`` expands to
a left-nested product of k copies of t.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from collections.abc import Iterable

from .errors import TermSyntaxError, ValidationError


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Inv(Term):
    arg: Term


@dataclass(frozen=True)
class SkewDiff(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class SkewAdd(Term):
    left: Term
    right: Term


def dom(t: Term) -> Term:
    return Mul(Inv(t), t)


def ran(t: Term) -> Term:
    return Mul(t, Inv(t))


def power(t: Term, k: int) -> Term:
    if k < 1:
        raise ValidationError("powers must be positive")
    out = t
    for _ in range(k - 1):
        out = Mul(out, t)
    return out


def variables(t: Term) -> tuple[str, ...]:
    """Variables of t, sorted."""
    found: set[str] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            found.add(u.name)
        elif isinstance(u, Inv):
            stack.append(u.arg)
        elif not isinstance(u, Zero):
            stack.extend((u.left, u.right))
    return tuple(sorted(found))


# ---------------------------------------------------------------- parser

_TOKEN = re.compile(r"\s*(?:(?P<ident>[a-z][a-z0-9]*)|(?P<int>[0-9]+)|(?P<op>[()+~*'^]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out, pos = [], 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip() == "":
                break
            col = pos + len(rest) - len(rest.lstrip()) + 1
            raise TermSyntaxError(f"unexpected character {text[col - 1]!r}", col)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


class _Parser:
    def __init__(self, text: str, alphabet: Iterable[str] | None):
        self.toks = _tokenize(text)
        self.k = 0
        self.alphabet = None if alphabet is None else set(alphabet)

    def peek(self):
        return self.toks[self.k]

    def take(self, value: str | None = None):
        tok = self.toks[self.k]
        if value is not None and tok[1] != value:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise TermSyntaxError(f"expected {value!r}, found {what}", tok[2])
        self.k += 1
        return tok

    def parse(self) -> Term:
        t = self.add()
        tok = self.peek()
        if tok[0] != "end":
            raise TermSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return t

    def add(self) -> Term:
        t = self.sd()
        while self.peek()[1] == "+":
            self.take()
            t = SkewAdd(t, self.sd())
        return t

    def sd(self) -> Term:
        t = self.mul()
        while self.peek()[1] == "~":
            self.take()
            t = SkewDiff(t, self.mul())
        return t

    def mul(self) -> Term:
        t = self.unary()
        while self.peek()[1] == "*":
            self.take()
            t = Mul(t, self.unary())
        return t

    def unary(self) -> Term:
        t = self.atom()
        while self.peek()[1] in ("'", "^"):
            if self.take()[1] == "'":
                t = Inv(t)
            else:
                tok = self.take()
                if tok[0] != "int" or int(tok[1]) < 1:
                    raise TermSyntaxError("expected a positive exponent", tok[2])
                t = power(t, int(tok[1]))
        return t

    def atom(self) -> Term:
        kind, val, col = self.peek()
        if kind == "int" and val == "0":
            self.take()
            return Zero()
        if kind == "ident":
            self.take()
            if val in ("d", "r") and self.peek()[1] == "(":
                self.take("(")
                inner = self.add()
                self.take(")")
                return dom(inner) if val == "d" else ran(inner)
            if self.alphabet is not None and val not in self.alphabet:
                raise TermSyntaxError(f"variable {val!r} not in alphabet", col)
            return Var(val)
        if val == "(":
            self.take()
            inner = self.add()
            self.take(")")
            return inner
        what = "end of input" if kind == "end" else repr(val)
        raise TermSyntaxError(f"expected a term, found {what}", col)


def parse(text: str, alphabet: Iterable[str] | None = None) -> Term:
    """Parse a term; ``alphabet`` (if given) restricts variable names."""
    return _Parser(text, alphabet).parse()


# ---------------------------------------------------------------- printer

_LEVEL = {SkewAdd: 1, SkewDiff: 2, Mul: 3}
_SYMBOL = {SkewAdd: " + ", SkewDiff: " ~ ", Mul: " * "}


def to_string(t: Term) -> str:
    """Print with the fewest parentheses that parse back to the same tree."""
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Inv):
        inner = to_string(t.arg)
        if isinstance(t.arg, (Zero, Var, Inv)):
            return inner + "'"
        return f"({inner})'"
    lvl = _LEVEL[type(t)]
    left = to_string(t.left)
    right = to_string(t.right)
    if type(t.left) in _LEVEL and _LEVEL[type(t.left)] < lvl:
        left = f"({left})"
    if type(t.right) in _LEVEL and _LEVEL[type(t.right)] <= lvl:
        right = f"({right})"
    return left + _SYMBOL[type(t)] + right
