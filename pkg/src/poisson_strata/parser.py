"""Recursive-descent parser for algebra expressions.

Grammar (whitespace-insensitive, juxtaposition means product):

    expr    := ['-'] term (('+' | '-') term)*
    term    := factor ('*'? factor)*
    factor  := primary ('^' INT)*
    primary := RATIONAL | VAR | '(' expr ')' | '{' expr ',' expr '}'
    RATIONAL:= digits ('/' digits)?
    VAR     := (y | x | Y | X | Omega) digits

Bracket pairs {f, g} are only meaningful when evaluating against a Poisson
structure.  Syntax errors carry the offending offset.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .algebra_an import PoissonParams, omega
from .algebra_kn import NCElement, QuantumParams, kn_names, nc_multiply, omega_q
from .exact_poly import LaurentPoly
from .poisson_core import PoissonStructure


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Bracket:
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Var, Add, Sub, Mul, Pow, Bracket]

_VAR_RE = re.compile(r"(Omega|y|x|Y|X)([0-9]+)$")
_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>[0-9]+(?:/[0-9]+)?)|(?P<ident>[A-Za-z]+[0-9]*)|(?P<op>[-+*^(){},]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", len(text) - len(stripped))
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def advance(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect_op(self, op: str):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"expected {op!r}", pos)
        return self.advance()

    def parse(self) -> Expr:
        ast = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return ast

    def expr(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            ast: Expr = Mul(Num(Fraction(-1)), self.term())
        else:
            ast = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            rhs = self.term()
            ast = Add(ast, rhs) if op == "+" else Sub(ast, rhs)
        return ast

    def term(self) -> Expr:
        ast = self.factor()
        while True:
            kind, text, pos = self.peek()
            if kind == "op" and text == "*":
                self.advance()
                ast = Mul(ast, self.factor())
            elif kind in ("number", "ident") or (kind == "op" and text in "({"):
                ast = Mul(ast, self.factor())
            else:
                return ast

    def factor(self) -> Expr:
        ast = self.primary()
        while self.peek()[:2] == ("op", "^"):
            self.advance()
            sign = 1
            if self.peek()[:2] == ("op", "-"):
                self.advance()
                sign = -1
            kind, text, pos = self.peek()
            if kind != "number" or "/" in text:
                raise ParseError("expected an integer exponent", pos)
            self.advance()
            ast = Pow(ast, sign * int(text))
        return ast

    def primary(self) -> Expr:
        kind, text, pos = self.advance()
        if kind == "number":
            if "/" in text:
                num, den = text.split("/")
                return Num(Fraction(int(num), int(den)))
            return Num(Fraction(int(text)))
        if kind == "ident":
            if not _VAR_RE.match(text):
                raise ParseError(f"not a variable name: {text!r}", pos)
            return Var(text)
        if kind == "op" and text == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "op" and text == "{":
            left = self.expr()
            self.expect_op(",")
            right = self.expr()
            self.expect_op("}")
            return Bracket(left, right)
        raise ParseError(f"unexpected {text or 'end of input'!r}", pos)


def parse_expr(text: str) -> Expr:
    return _Parser(text).parse()


def ast_to_text(ast: Expr) -> str:
    """Fully parenthesized canonical text; parsing it back gives the same tree."""
    if isinstance(ast, Num):
        return str(ast.value)
    if isinstance(ast, Var):
        return ast.name
    if isinstance(ast, Add):
        return f"({ast_to_text(ast.left)} + {ast_to_text(ast.right)})"
    if isinstance(ast, Sub):
        return f"({ast_to_text(ast.left)} - {ast_to_text(ast.right)})"
    if isinstance(ast, Mul):
        return f"({ast_to_text(ast.left)} * {ast_to_text(ast.right)})"
    if isinstance(ast, Pow):
        return f"({ast_to_text(ast.base)}^{ast.exponent})"
    if isinstance(ast, Bracket):
        return f"{{{ast_to_text(ast.left)}, {ast_to_text(ast.right)}}}"
    raise TypeError(f"not an expression node: {ast!r}")


def eval_poisson(ast: Expr, structure: PoissonStructure, params: PoissonParams) -> LaurentPoly:
    vs = structure.varspec

    def ev(node: Expr) -> LaurentPoly:
        if isinstance(node, Num):
            return LaurentPoly.constant(vs, node.value)
        if isinstance(node, Var):
            match = _VAR_RE.match(node.name)
            if match.group(1) == "Omega":
                k = int(match.group(2))
                if k > params.n:
                    raise EvalError(f"no tail element of index {k} for n={params.n}")
                return omega(params, k, vs)
            if node.name not in vs.names:
                raise EvalError(f"unknown variable {node.name!r}")
            return LaurentPoly.variable(vs, node.name)
        if isinstance(node, Add):
            return ev(node.left) + ev(node.right)
        if isinstance(node, Sub):
            return ev(node.left) - ev(node.right)
        if isinstance(node, Mul):
            return ev(node.left) * ev(node.right)
        if isinstance(node, Pow):
            return ev(node.base) ** node.exponent
        if isinstance(node, Bracket):
            return structure.bracket(ev(node.left), ev(node.right))
        raise TypeError(f"not an expression node: {node!r}")

    return ev(ast)


def eval_quantum(ast: Expr, params: QuantumParams, max_steps: int = 10**6) -> NCElement:
    names = set(kn_names(params.n))

    def ev(node: Expr) -> NCElement:
        if isinstance(node, Num):
            return NCElement.one(params.n).scale(node.value)
        if isinstance(node, Var):
            match = _VAR_RE.match(node.name)
            if match.group(1) == "Omega":
                k = int(match.group(2))
                if k > params.n:
                    raise EvalError(f"no tail element of index {k} for n={params.n}")
                return omega_q(params, k)
            if node.name not in names:
                raise EvalError(f"unknown variable {node.name!r}")
            return NCElement.generator(params.n, node.name)
        if isinstance(node, Add):
            return ev(node.left) + ev(node.right)
        if isinstance(node, Sub):
            return ev(node.left) - ev(node.right)
        if isinstance(node, Mul):
            return nc_multiply(params, ev(node.left), ev(node.right), max_steps)
        if isinstance(node, Pow):
            if node.exponent < 0:
                raise EvalError("negative powers are not defined in the quantized algebra")
            out = NCElement.one(params.n)
            base = ev(node.base)
            for _ in range(node.exponent):
                out = nc_multiply(params, out, base, max_steps)
            return out
        if isinstance(node, Bracket):
            raise EvalError("bracket pairs are only valid in poisson mode")
        raise TypeError(f"not an expression node: {node!r}")

    return ev(ast)
