"""A small deterministic expression language for coefficient functions.

Grammar: number literals, one free variable (``t`` for coefficients, ``y``
for impulse maps), binary ``+ - * / ^`` (``^`` right-associative), unary
minus, parentheses, the functions ``sin cos exp abs sqrt tanh`` and the
constant ``pi``. Parsing is recursive descent with precedence climbing and
byte-offset-annotated errors. Evaluation follows IEEE-754 double semantics;
division by zero and domain errors (sqrt of a negative, fractional power of
a negative) are reported as :class:`ExprEvalError`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import ExprEvalError, ExprSyntaxError, ValidationError

_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "abs": abs,
    "sqrt": math.sqrt,
    "tanh": math.tanh,
}

_NUMBER = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")

_BINARY_BP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_RIGHT_ASSOC = {"^"}
_UNARY_BP = 25  # binds tighter than * /, looser than ^


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    operand: "Node"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Node"


Node = Num | Var | Unary | Binary | Call


@dataclass(frozen=True)
class _Token:
    kind: str  # NUM IDENT OP LPAREN RPAREN EOF
    text: str
    offset: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        m = _NUMBER.match(source, i)
        if m:
            tokens.append(_Token("NUM", m.group(), i))
            i = m.end()
            continue
        m = _IDENT.match(source, i)
        if m:
            tokens.append(_Token("IDENT", m.group(), i))
            i = m.end()
            continue
        if ch in "+-*/^":
            tokens.append(_Token("OP", ch, i))
        elif ch == "(":
            tokens.append(_Token("LPAREN", ch, i))
        elif ch == ")":
            tokens.append(_Token("RPAREN", ch, i))
        else:
            raise ExprSyntaxError(f"unexpected character {ch!r}", i)
        i += 1
    tokens.append(_Token("EOF", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], variable: str):
        self.tokens = tokens
        self.pos = 0
        self.variable = variable

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> Node:
        node = self.expression(0)
        tok = self.peek()
        if tok.kind != "EOF":
            raise ExprSyntaxError(f"unexpected {tok.text!r}", tok.offset)
        return node

    def expression(self, min_bp: int) -> Node:
        left = self.prefix()
        while True:
            tok = self.peek()
            if tok.kind != "OP":
                break
            bp = _BINARY_BP[tok.text]
            if bp <= min_bp:
                break
            self.advance()
            rhs_bp = bp - 1 if tok.text in _RIGHT_ASSOC else bp
            left = Binary(tok.text, left, self.expression(rhs_bp))
        return left

    def prefix(self) -> Node:
        tok = self.advance()
        if tok.kind == "NUM":
            return Num(float(tok.text))
        if tok.kind == "IDENT":
            if tok.text == self.variable:
                return Var(tok.text)
            if tok.text == "pi":
                return Num(math.pi)
            if tok.text in _FUNCTIONS:
                opening = self.advance()
                if opening.kind != "LPAREN":
                    raise ExprSyntaxError(f"{tok.text} requires parentheses", opening.offset)
                if self.peek().kind == "RPAREN":
                    raise ExprSyntaxError(f"empty argument list for {tok.text}", self.peek().offset)
                arg = self.expression(0)
                closing = self.advance()
                if closing.kind != "RPAREN":
                    raise ExprSyntaxError("unbalanced parentheses", closing.offset)
                return Call(tok.text, arg)
            raise ExprSyntaxError(f"unknown identifier {tok.text!r}", tok.offset)
        if tok.kind == "OP" and tok.text == "-":
            return Unary(self.expression(_UNARY_BP))
        if tok.kind == "LPAREN":
            inner = self.expression(0)
            closing = self.advance()
            if closing.kind != "RPAREN":
                raise ExprSyntaxError("unbalanced parentheses", closing.offset)
            return inner
        raise ExprSyntaxError(
            "unexpected end of input" if tok.kind == "EOF" else f"unexpected {tok.text!r}",
            tok.offset,
        )


@dataclass(frozen=True)
class Expr:
    """A parsed expression in one free variable; immutable, pure to evaluate."""

    root: Node
    variable: str
    source: str

    def __call__(self, value: float) -> float:
        return evaluate(self, value)

    def to_source(self) -> str:
        return _print(self.root)


def parse(source: str, variable_name: str) -> Expr:
    """Parse an expression with the given free variable name."""
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 0)
    if not variable_name.isidentifier():
        raise ValidationError(f"bad variable name {variable_name!r}", field="variable_name")
    tokens = _tokenize(source)
    return Expr(_Parser(tokens, variable_name).parse(), variable_name, source)


def _eval_node(node: Node, value: float) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return value
    if isinstance(node, Unary):
        return -_eval_node(node.operand, value)
    if isinstance(node, Call):
        arg = _eval_node(node.arg, value)
        try:
            return float(_FUNCTIONS[node.fn](arg))
        except ValueError:
            raise ExprEvalError(f"domain error in {node.fn}({arg!r})") from None
        except OverflowError:
            return math.inf if arg > 0 else 0.0
    left = _eval_node(node.left, value)
    right = _eval_node(node.right, value)
    op = node.op
    try:
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            return left / right
        return left**right
    except ZeroDivisionError:
        raise ExprEvalError(f"division by zero ({left!r} {op} {right!r})") from None
    except ValueError:
        raise ExprEvalError(f"domain error ({left!r} ^ {right!r})") from None
    except OverflowError:
        negative = left < 0 and float(right).is_integer() and int(right) % 2 == 1
        return -math.inf if negative else math.inf


def evaluate(expr: Expr, value: float) -> float:
    """Evaluate at one point with IEEE-754 double semantics."""
    value = float(value)  # numpy scalars would silence overflow errors
    if not math.isfinite(value):
        raise ExprEvalError(f"non-finite argument {value!r}")
    return _eval_node(expr.root, value)


def _print(node: Node) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Unary):
        return f"(-{_print(node.operand)})"
    if isinstance(node, Call):
        return f"{node.fn}({_print(node.arg)})"
    return f"({_print(node.left)}{node.op}{_print(node.right)})"


def bound_on_interval(expr: Expr, lo: float, hi: float, samples: int = 1025) -> float:
    """Max of |expr| over a uniform sample grid including both endpoints.

    A sampling estimate, not a rigorous bound; evaluation errors propagate.
    """
    if samples < 64:
        raise ValidationError("need at least 64 samples", field="samples")
    if hi < lo:
        raise ValidationError("empty interval", field="hi")
    step = (hi - lo) / (samples - 1)
    best = 0.0
    for i in range(samples):
        v = abs(evaluate(expr, lo + i * step if i < samples - 1 else hi))
        if v > best:
            best = v
    return best
