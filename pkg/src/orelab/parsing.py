"""Tokenizer and recursive-descent parser for the shared expression grammar.

The parser produces a small tuple-based syntax tree which is then evaluated
against an environment. The environment decides what names and numbers mean,
so one grammar serves field elements, Ore polynomials, fractions and series.

Products are parsed left-associatively, which is exactly the left-to-right
evaluation order required for noncommutative rings.
"""
from __future__ import annotations

import re
from typing import Any, Callable

from .errors import ParseError

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\.\.|[-+*/^(),;=]))"
)


def tokenize(text: str) -> list[tuple[str, Any, int]]:
    """Split ``text`` into ``(kind, value, position)`` triples ending with an EOF token."""
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "num":
            value = int(value)
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("eof", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, op: str) -> bool:
        kind, value, _ = self.peek()
        if kind == "op" and value == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str):
        kind, value, pos = self.peek()
        if kind != "op" or value != op:
            shown = "end of input" if kind == "eof" else repr(value)
            raise ParseError(f"expected {op!r}, found {shown}", pos, self.text)
        self.i += 1

    def parse(self):
        node = self.expr()
        kind, value, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected token {value!r}", pos, self.text)
        return node

    def expr(self):
        node = self.term()
        while True:
            pos = self.peek()[2]
            if self.accept("+"):
                node = ("add", node, self.term(), pos)
            elif self.accept("-"):
                node = ("sub", node, self.term(), pos)
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            pos = self.peek()[2]
            if self.accept("*"):
                node = ("mul", node, self.unary(), pos)
            elif self.accept("/"):
                node = ("div", node, self.unary(), pos)
            else:
                return node

    def unary(self):
        pos = self.peek()[2]
        if self.accept("-"):
            return ("neg", self.unary(), pos)
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        pos = self.peek()[2]
        if self.accept("^"):
            node = ("pow", node, self.exponent(), pos)
        return node

    def exponent(self) -> int:
        sign = 1
        paren = self.accept("(")
        if self.accept("-"):
            sign = -1
        kind, value, pos = self.next()
        if kind != "num":
            raise ParseError("exponent must be an integer", pos, self.text)
        if paren:
            self.expect(")")
        return sign * value

    def atom(self):
        kind, value, pos = self.next()
        if kind == "num":
            return ("num", value, pos)
        if kind == "name":
            if self.accept("("):
                args = self.arglist()
                return ("call", value, args, pos)
            return ("name", value, pos)
        if kind == "op" and value == "(":
            items = [self.expr()]
            while self.accept(";"):
                items.append(self.expr())
            self.expect(")")
            if len(items) == 1:
                return items[0]
            return ("tuple", items, pos)
        shown = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"unexpected {shown}", pos, self.text)

    def arglist(self):
        args = []
        if self.accept(")"):
            return args
        args.append(self.expr())
        while self.accept(";") or self.accept(","):
            args.append(self.expr())
        self.expect(")")
        return args


def parse_expression(text: str):
    """Parse ``text`` into a syntax tree."""
    if not text or not text.strip():
        raise ParseError("empty expression", 0, text)
    return _Parser(text).parse()


class Env:
    """Evaluation environment; subclasses map names, numbers and calls to values."""

    def number(self, n: int, pos: int):
        raise NotImplementedError

    def name(self, name: str, pos: int):
        raise ParseError(f"unknown symbol {name!r}", pos)

    def call(self, name: str, args: list, pos: int, ev: Callable):
        raise ParseError(f"unknown function {name!r}", pos)

    def tuple(self, items: list, pos: int, ev: Callable):
        raise ParseError("tuple not allowed here", pos)

    def divide(self, a, b, pos: int):
        return a / b

    def power(self, a, n: int, pos: int):
        return a ** n


def evaluate(node, env: Env):
    """Evaluate a syntax tree bottom-up against ``env``."""
    tag = node[0]
    ev = lambda sub: evaluate(sub, env)
    try:
        if tag == "num":
            return env.number(node[1], node[2])
        if tag == "name":
            return env.name(node[1], node[2])
        if tag == "call":
            return env.call(node[1], node[2], node[3], ev)
        if tag == "tuple":
            return env.tuple(node[1], node[2], ev)
        if tag == "neg":
            return -ev(node[1])
        if tag == "pow":
            return env.power(ev(node[1]), node[2], node[3])
        a = ev(node[1])
        b = ev(node[2])
        if tag == "add":
            return a + b
        if tag == "sub":
            return a - b
        if tag == "mul":
            return a * b
        if tag == "div":
            return env.divide(a, b, node[3])
    except ParseError:
        raise
    except TypeError as exc:
        raise ParseError(f"cannot combine operands: {exc}", node[-1] if isinstance(node[-1], int) else None) from exc
    raise ParseError(f"unsupported syntax node {tag}")


def split_top_level(text: str, sep: str = ";") -> list[str]:
    """Split on ``sep`` occurring outside any parentheses or braces."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts
