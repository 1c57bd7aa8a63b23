"""Coefficient expressions: a tiny arithmetic language over x<k>, y<k> and t.

Grammar (binding power, tightest last)::

    + -        10  left
    * /        20  left
    unary -    25
    ^          30  right; exponent must be a constant integer

Functions: sin, cos, exp, sqrt, abs. ``-2^2`` is ``-(2^2) = -4``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import SympInvError

FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "abs": abs,
}

_VARIABLE = re.compile(r"^(?:[xy][1-9][0-9]*|t)$")

PREC_ADD, PREC_MUL, PREC_NEG, PREC_POW, PREC_ATOM = 10, 20, 25, 30, 40


class ExprError(SympInvError, ValueError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        hint = f"; expected one of {sorted(self.expected)}" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{hint}")


class UnknownIdentifierError(ExprSyntaxError):
    pass


class EvaluationError(ExprError):
    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"{message} (at offset {offset})")


class UnboundVariableError(EvaluationError):
    pass


class DivisionByZeroError(EvaluationError):
    pass


class MathDomainError(EvaluationError):
    pass


# -- AST ---------------------------------------------------------------------
# ``offset`` is excluded from equality so reparsed trees compare structurally.


@dataclass(frozen=True)
class Num:
    value: float | int
    offset: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    offset: int = field(default=0, compare=False, repr=False)

    @property
    def kind(self) -> str:
        return self.name[0]

    @property
    def index(self) -> int | None:
        return None if self.name == "t" else int(self.name[1:])


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    offset: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    offset: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"
    offset: int = field(default=0, compare=False, repr=False)


Expr = Num | Var | Neg | BinOp | Call

_BINARY_PREC = {"+": PREC_ADD, "-": PREC_ADD, "*": PREC_MUL, "/": PREC_MUL, "^": PREC_POW}


# -- lexer -------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "op", "end"
    text: str
    offset: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", _byte_offset(source, pos))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), _byte_offset(source, pos)))
        pos = m.end()
    tokens.append(Token("end", "", _byte_offset(source, len(source))))
    return tokens


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


# -- Pratt parser ------------------------------------------------------------

_PREFIX_EXPECTED = ("number", "variable", "function", "(", "-")


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.token
        if tok.text != text or tok.kind == "end":
            raise ExprSyntaxError(f"unexpected {_describe(tok)}", tok.offset, (text,))
        return self.advance()

    def parse(self) -> Expr:
        node = self.expression(0)
        if self.token.kind != "end":
            raise ExprSyntaxError(
                f"unexpected {_describe(self.token)}", self.token.offset, ("operator", "end of input")
            )
        return node

    def expression(self, rbp: int) -> Expr:
        left = self.nud(self.advance())
        while self.token.kind == "op" and _BINARY_PREC.get(self.token.text, 0) > rbp:
            left = self.led(self.advance(), left)
        return left

    def nud(self, tok: Token) -> Expr:
        if tok.kind == "num":
            return Num(_number(tok.text), tok.offset)
        if tok.kind == "ident":
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expression(0)
                self.expect(")")
                return Call(tok.text, arg, tok.offset)
            if _VARIABLE.match(tok.text):
                return Var(tok.text, tok.offset)
            raise UnknownIdentifierError(f"unknown identifier {tok.text!r}", tok.offset)
        if tok.text == "-":
            return Neg(self.expression(PREC_NEG), tok.offset)
        if tok.text == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        raise ExprSyntaxError(f"unexpected {_describe(tok)}", tok.offset, _PREFIX_EXPECTED)

    def led(self, tok: Token, left: Expr) -> Expr:
        prec = _BINARY_PREC[tok.text]
        if tok.text == "^":
            right = self.expression(prec - 1)
            _check_exponent(right, tok.offset)
        else:
            right = self.expression(prec)
        return BinOp(tok.text, left, right, tok.offset)


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "end" else repr(tok.text)


def _number(text: str):
    if re.fullmatch(r"\d+", text):
        return int(text)
    return float(text)


def _check_exponent(node: Expr, offset: int):
    if free_variables(node):
        raise ExprSyntaxError("exponent must be a constant integer", offset)
    try:
        value = evaluate(node, {})
    except EvaluationError as exc:
        raise ExprSyntaxError(f"bad exponent: {exc}", offset) from exc
    if value != int(value):
        raise ExprSyntaxError(f"exponent must be an integer, got {value}", offset)


def parse(source: str) -> Expr:
    return _Parser(source).parse()


# -- printing ----------------------------------------------------------------


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _BINARY_PREC[node.op]
    if isinstance(node, Neg):
        return PREC_NEG
    return PREC_ATOM


def to_source(node: Expr) -> str:
    """Render with the minimal parentheses that reparse to the same tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _prec(node.operand) < PREC_NEG)
    prec = _BINARY_PREC[node.op]
    if node.op == "^":
        left = _wrap(node.left, _prec(node.left) <= prec)
        right = _wrap(node.right, _prec(node.right) < prec)
        return f"{left}^{right}"
    left = _wrap(node.left, _prec(node.left) < prec)
    right = _wrap(node.right, _prec(node.right) <= prec)
    return f"{left} {node.op} {right}"


def _wrap(node: Expr, parens: bool) -> str:
    text = to_source(node)
    return f"({text})" if parens else text


# -- analysis and evaluation -------------------------------------------------


def free_variables(node: Expr) -> frozenset:
    if isinstance(node, Var):
        return frozenset((node.name,))
    if isinstance(node, Num):
        return frozenset()
    if isinstance(node, Neg):
        return free_variables(node.operand)
    if isinstance(node, Call):
        return free_variables(node.arg)
    return free_variables(node.left) | free_variables(node.right)


def rename(node: Expr, mapping: dict) -> Expr:
    """Substitute variable names, e.g. ``{"x1": "x2", "y1": "y2"}``."""
    if isinstance(node, Var):
        return Var(mapping.get(node.name, node.name), node.offset)
    if isinstance(node, Num):
        return node
    if isinstance(node, Neg):
        return Neg(rename(node.operand, mapping), node.offset)
    if isinstance(node, Call):
        return Call(node.func, rename(node.arg, mapping), node.offset)
    return BinOp(node.op, rename(node.left, mapping), rename(node.right, mapping), node.offset)


def evaluate(node: Expr, bindings: dict) -> float:
    if isinstance(node, Num):
        return float(node.value)
    if isinstance(node, Var):
        try:
            return float(bindings[node.name])
        except KeyError:
            raise UnboundVariableError(f"unbound variable {node.name!r}", node.offset) from None
    if isinstance(node, Neg):
        return -evaluate(node.operand, bindings)
    if isinstance(node, Call):
        arg = evaluate(node.arg, bindings)
        if node.func == "sqrt" and arg < 0:
            raise MathDomainError(f"sqrt of negative number {arg}", node.offset)
        try:
            return float(FUNCTIONS[node.func](arg))
        except (OverflowError, ValueError) as exc:
            raise MathDomainError(f"{node.func}({arg}): {exc}", node.offset) from None
    left = evaluate(node.left, bindings)
    right = evaluate(node.right, bindings)
    op = node.op
    try:
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            if right == 0:
                raise DivisionByZeroError("division by zero", node.offset)
            return left / right
        exponent = int(right)
        if left == 0 and exponent < 0:
            raise DivisionByZeroError("zero raised to a negative power", node.offset)
        return float(left**exponent)
    except OverflowError:
        raise MathDomainError(f"overflow evaluating {op!r}", node.offset) from None
