"""
Text grammar for phase-space expressions.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?          right-associative
    atom   := NUMBER | 'pi' | IDENT | FUNC '(' expr ')' | '(' expr ')'

Variables are x1, x2, x3, t (or X1, X2, X3, t for expressions written in the
new coordinates); any other identifier is a parameter.
"""
import re
from dataclasses import dataclass
from typing import List

import sympy

from exceptions import ExprSyntaxError, UnknownFunctionError, UnknownVariableError
from symbolic.variables import COORDINATE_NAMES, SIDES

FUNCTIONS = {
    "sin": sympy.sin,
    "cos": sympy.cos,
    "tan": sympy.tan,
    "atan": sympy.atan,
    "exp": sympy.exp,
    "ln": sympy.log,
    "sqrt": sympy.sqrt,
}

CONSTANTS = {"pi": sympy.pi}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ExprSyntaxError(f"Unexpected character {text[pos]!r}", pos, text)
        kind = match.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, match.group(), pos))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class Parser:
    def __init__(self, text: str, side: str = "x"):
        if side not in SIDES:
            raise ValueError(f"Unknown coordinate side: {side}")
        self.text = text
        self.side = side
        self.variables = SIDES[side]
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, value: str) -> Token:
        token = self.current
        if token.value != value:
            found = token.value or "end of input"
            raise ExprSyntaxError(f"Expected {value!r}, found {found!r}", token.position, self.text)
        return self.advance()

    def parse(self) -> sympy.Expr:
        if self.current.kind == "end":
            raise ExprSyntaxError("Empty expression", 0, self.text)
        expr = self.parse_expr()
        if self.current.kind != "end":
            raise ExprSyntaxError(f"Unexpected token {self.current.value!r}", self.current.position, self.text)
        return expr

    def parse_expr(self) -> sympy.Expr:
        left = self.parse_term()
        while self.current.value in ("+", "-"):
            op = self.advance().value
            right = self.parse_term()
            left = left + right if op == "+" else left - right
        return left

    def parse_term(self) -> sympy.Expr:
        left = self.parse_unary()
        while self.current.value in ("*", "/"):
            op = self.advance().value
            right = self.parse_unary()
            left = left * right if op == "*" else left / right
        return left

    def parse_unary(self) -> sympy.Expr:
        if self.current.value == "-":
            self.advance()
            return -self.parse_unary()
        if self.current.value == "+":
            self.advance()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> sympy.Expr:
        base = self.parse_atom()
        if self.current.value == "^":
            self.advance()
            exponent = self.parse_unary()
            return sympy.Pow(base, exponent)
        return base

    def parse_atom(self) -> sympy.Expr:
        token = self.current
        if token.kind == "number":
            self.advance()
            if re.fullmatch(r"\d+", token.value):
                return sympy.Integer(token.value)
            return sympy.Float(float(token.value))
        if token.value == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if token.kind == "ident":
            return self.parse_identifier()
        found = token.value or "end of input"
        raise ExprSyntaxError(f"Unexpected token {found!r}", token.position, self.text)

    def parse_identifier(self) -> sympy.Expr:
        token = self.advance()
        name = token.value
        if self.current.value == "(":
            if name not in FUNCTIONS:
                raise UnknownFunctionError(f"Unknown function {name!r}", token.position, self.text)
            self.advance()
            argument = self.parse_expr()
            self.expect(")")
            return FUNCTIONS[name](argument)
        if name in FUNCTIONS:
            raise ExprSyntaxError(f"Function {name!r} needs an argument", token.position, self.text)
        if name in CONSTANTS:
            return CONSTANTS[name]
        if name in self.variables:
            return self.variables[name]
        if name in COORDINATE_NAMES:
            raise UnknownVariableError(
                f"Variable {name!r} is not a coordinate of the {self.side}-side", token.position, self.text
            )
        return sympy.Symbol(name)


def parse(text: str, side: str = "x") -> sympy.Expr:
    """Parse `text` into an expression tree over the given coordinate side."""
    if not isinstance(text, str):
        raise ExprSyntaxError(f"Expected an expression string, got {type(text).__name__}")
    return Parser(text, side).parse()
