"""Tokenizer and recursive-descent parser for the small expression language.

The same grammar serves two clients: polynomial text (``3/2*H^2*c2 - c3``)
parsed by :mod:`quartic_chow.poly`, and the right-hand sides of scene-file
statements, which additionally allow function calls, keyword arguments,
string literals and bracketed lists.

Grammar (lowest to highest precedence)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' unary)?
    atom    := NUMBER | STRING | NAME | NAME '(' args ')' | '(' expr ')' | '[' items ']'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import SceneError

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<op>\*\*|[-+*/^(),\[\]=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens; raises ``SceneError`` on stray characters."""
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SceneError(f"unexpected character {text[pos]!r} at column {pos + 1}")
        kind = m.lastgroup or ""
        if kind != "ws":
            tok = m.group(kind)
            if tok == "**":
                tok = "^"
            tokens.append(Token(kind, tok, pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Str:
    value: str


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Node", ...]
    kwargs: tuple[tuple[str, "Node"], ...]


@dataclass(frozen=True)
class ListNode:
    items: tuple["Node", ...]


Node = Union[Num, Str, Name, Neg, BinOp, Call, ListNode]


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.take()
        if tok.text != text:
            raise SceneError(f"expected {text!r} at column {tok.pos + 1} in {self.text!r}")
        return tok

    def parse(self) -> Node:
        node = self.expr()
        if self.peek().kind != "end":
            tok = self.peek()
            raise SceneError(f"unexpected {tok.text!r} at column {tok.pos + 1} in {self.text!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.take().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.peek().text == "-":
            self.take()
            return Neg(self.unary())
        if self.peek().text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        if self.peek().text == "^":
            self.take()
            node = BinOp("^", node, self.unary())
        return node

    def atom(self) -> Node:
        tok = self.take()
        if tok.kind == "num":
            return Num(Fraction(tok.text))
        if tok.kind == "str":
            return Str(re.sub(r"\\(.)", r"\1", tok.text[1:-1]))
        if tok.kind == "name":
            if self.peek().text == "(":
                self.take()
                return self.call_rest(tok.text)
            return Name(tok.text)
        if tok.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if tok.text == "[":
            items: list[Node] = []
            if self.peek().text != "]":
                items.append(self.expr())
                while self.peek().text == ",":
                    self.take()
                    items.append(self.expr())
            self.expect("]")
            return ListNode(tuple(items))
        raise SceneError(f"unexpected {tok.text or 'end of input'!r} at column {tok.pos + 1} in {self.text!r}")

    def call_rest(self, func: str) -> Call:
        args: list[Node] = []
        kwargs: list[tuple[str, Node]] = []
        if self.peek().text != ")":
            while True:
                tok = self.peek()
                nxt = self.tokens[self.i + 1]
                if tok.kind == "name" and nxt.text == "=":
                    self.take()
                    self.take()
                    kwargs.append((tok.text, self.expr()))
                else:
                    if kwargs:
                        raise SceneError(f"positional argument after keyword in call to {func}")
                    args.append(self.expr())
                if self.peek().text != ",":
                    break
                self.take()
        self.expect(")")
        return Call(func, tuple(args), tuple(kwargs))


def parse_expr(text: str) -> Node:
    """Parse ``text`` into an expression tree."""
    return _Parser(text).parse()
