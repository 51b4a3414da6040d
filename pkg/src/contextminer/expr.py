"""Tiny arithmetic expression language for user-defined scoring.

Grammar (recursive descent, one token of lookahead):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | primary
    primary := NUMBER | IDENT | IDENT '(' expr (',' expr)* ')' | '(' expr ')'

Functions: abs, log (natural), min, max.  Identifiers are validated at
parse time against the caller's allowed set, so a typo fails once with
a position instead of failing per evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

FUNCTIONS = {
    "abs": (1, 1),
    "log": (1, 1),
    "min": (2, None),
    "max": (2, None),
}


class ExprError(ValueError):
    """Parse or evaluation failure; carries the 0-based source position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


@dataclass(frozen=True)
class Token:
    kind: str  # number | ident | op | lparen | rparen | comma | end
    text: str
    pos: int


def _tokenize(source: str) -> list[Token]:
    tokens = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            start = i
            while i < n and (source[i].isdigit() or source[i] == "."):
                i += 1
            text = source[start:i]
            if text.count(".") > 1:
                raise ExprError(f"malformed number {text!r}", start)
            tokens.append(Token("number", text, start))
        elif ch.isalpha() or ch == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            tokens.append(Token("ident", source[start:i], start))
        elif ch in "+-*/":
            tokens.append(Token("op", ch, i))
            i += 1
        elif ch == "(":
            tokens.append(Token("lparen", ch, i))
            i += 1
        elif ch == ")":
            tokens.append(Token("rparen", ch, i))
            i += 1
        elif ch == ",":
            tokens.append(Token("comma", ch, i))
            i += 1
        else:
            raise ExprError(f"unexpected character {ch!r}", i)
    tokens.append(Token("end", "", n))
    return tokens


# AST nodes are plain tuples: ("num", x), ("var", name), ("neg", node),
# ("bin", op, left, right), ("call", fname, [args]).


class _Parser:
    def __init__(self, tokens: list[Token], variables: frozenset[str]):
        self.tokens = tokens
        self.variables = variables
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.cur
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        if self.cur.kind != kind:
            raise ExprError(f"expected {what}", self.cur.pos)
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.cur.kind != "end":
            raise ExprError(f"unexpected {self.cur.text!r}", self.cur.pos)
        return node

    def expr(self):
        node = self.term()
        while self.cur.kind == "op" and self.cur.text in "+-":
            op = self.advance().text
            node = ("bin", op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.cur.kind == "op" and self.cur.text in "*/":
            op = self.advance().text
            node = ("bin", op, node, self.unary())
        return node

    def unary(self):
        if self.cur.kind == "op" and self.cur.text == "-":
            self.advance()
            return ("neg", self.unary())
        return self.primary()

    def primary(self):
        tok = self.cur
        if tok.kind == "number":
            self.advance()
            return ("num", float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if self.cur.kind == "lparen":
                return self.call(tok)
            if tok.text not in self.variables:
                raise ExprError(f"unknown identifier {tok.text!r}", tok.pos)
            return ("var", tok.text)
        if tok.kind == "lparen":
            self.advance()
            node = self.expr()
            self.expect("rparen", "')'")
            return node
        raise ExprError(f"expected a value, got {tok.text or 'end of input'!r}", tok.pos)

    def call(self, name: Token):
        if name.text not in FUNCTIONS:
            raise ExprError(f"unknown function {name.text!r}", name.pos)
        self.expect("lparen", "'('")
        args = [self.expr()]
        while self.cur.kind == "comma":
            self.advance()
            args.append(self.expr())
        self.expect("rparen", "')'")
        lo, hi = FUNCTIONS[name.text]
        if len(args) < lo or (hi is not None and len(args) > hi):
            raise ExprError(
                f"{name.text} takes {lo}{'+' if hi is None else ''} argument(s)",
                name.pos,
            )
        return ("call", name.text, args)


def parse(source: str, variables: set[str] | frozenset[str]):
    """Compile source to an AST; raises ExprError with a position."""
    if not source.strip():
        raise ExprError("empty expression", 0)
    return _Parser(_tokenize(source), frozenset(variables)).parse()


def evaluate(node, env: dict[str, float]) -> float:
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "var":
        return env[node[1]]
    if kind == "neg":
        return -evaluate(node[1], env)
    if kind == "bin":
        _, op, left, right = node
        a, b = evaluate(left, env), evaluate(right, env)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if b == 0.0:
            raise ZeroDivisionError("division by zero")
        return a / b
    _, fname, args = node
    values = [evaluate(a, env) for a in args]
    if fname == "abs":
        return abs(values[0])
    if fname == "log":
        if values[0] <= 0.0:
            raise ValueError(f"log of non-positive value {values[0]}")
        return math.log(values[0])
    if fname == "min":
        return min(values)
    return max(values)
