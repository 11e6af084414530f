"""Tokenizer, recursive-descent parser and AST for the polynomial text grammar.

The grammar is small and shared by polynomial components, time coefficients
and candidate superposition rules::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' exponent)?
    exponent := ('+' | '-')? INT | '(' expr ')'
    atom   := INT | NAME | '(' expr ')'

Implicit multiplication (``2x``, ``x y``) is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union


class ParseError(ValueError):
    """Syntax error carrying a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Num:
    value: Fraction

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg:
    operand: "Node"

    def __str__(self) -> str:
        return f"-({self.operand})"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"

    def __str__(self) -> str:
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int

    def __str__(self) -> str:
        return f"({self.base})^{self.exponent}"


Node = Union[Num, Var, Neg, BinOp, Pow]


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    line: int
    column: int


def tokenize(text: str) -> Iterator[Token]:
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
        elif ch.isspace():
            i += 1
            col += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            yield Token("int", text[i:j], line, col)
            col += j - i
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            yield Token("name", text[i:j], line, col)
            col += j - i
            i = j
        elif ch in "+-*/^()":
            yield Token("op", ch, line, col)
            i += 1
            col += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    yield Token("end", "", line, col)


class _Parser:
    def __init__(self, text: str, names: frozenset[str] | None):
        self.tokens = list(tokenize(text))
        self.pos = 0
        self.names = names

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.column)

    def eat(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.eat(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            tok = self.tok
            if tok.kind in ("int", "name") or tok.text == "(":
                raise self.error("implicit multiplication is not allowed; use '*'")
            raise self.error(f"unexpected {tok.text!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.pos += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.pos += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.eat("-"):
            return Neg(self.unary())
        if self.eat("+"):
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.eat("^"):
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> int:
        tok = self.tok
        sign = 1
        if self.eat("-"):
            sign = -1
        elif self.eat("+"):
            pass
        if self.tok.kind == "int":
            value = int(self.tok.text)
            self.pos += 1
            return sign * value
        if self.eat("("):
            inner = self.expr()
            self.expect(")")
            try:
                value = evaluate(inner, {})
            except (KeyError, ZeroDivisionError):
                raise self.error("exponent must be a constant integer", tok) from None
            if value.denominator != 1:
                raise self.error("exponent must be an integer", tok)
            return sign * int(value)
        raise self.error("expected integer exponent")

    def atom(self) -> Node:
        tok = self.tok
        if tok.kind == "int":
            self.pos += 1
            return Num(Fraction(int(tok.text)))
        if tok.kind == "name":
            if self.names is not None and tok.text not in self.names:
                raise self.error(f"unknown variable {tok.text!r}")
            self.pos += 1
            return Var(tok.text)
        if self.eat("("):
            node = self.expr()
            self.expect(")")
            return node
        found = tok.text or "end of input"
        raise self.error(f"unexpected {found!r}")


def parse(text: str, names=None) -> Node:
    """Parse `text` into an AST; `names` restricts the admissible variables."""
    return _Parser(text, None if names is None else frozenset(names)).parse()


def evaluate(node: Node, env: dict):
    """Evaluate an AST with variables bound in `env` (Fractions or floats)."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Neg):
        return -evaluate(node.operand, env)
    if isinstance(node, Pow):
        base = evaluate(node.base, env)
        if node.exponent < 0 and base == 0:
            raise ZeroDivisionError(f"division by zero in {node}")
        return base**node.exponent
    left = evaluate(node.left, env)
    right = evaluate(node.right, env)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if right == 0:
        raise ZeroDivisionError(f"division by zero in {node}: {node.right} vanishes")
    return left / right


def variables(node: Node) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, (Neg,)):
        return variables(node.operand)
    if isinstance(node, Pow):
        return variables(node.base)
    return variables(node.left) | variables(node.right)
