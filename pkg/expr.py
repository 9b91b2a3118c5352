"""
Expression front-end: parse textual functions of one variable `t` into a tree,
evaluate them (scalar or numpy-vectorized) and differentiate them in forward
mode with dual numbers.

Grammar:
    expr    := expr ('+' | '-') expr | expr ('*' | '/') expr
             | '-' expr | expr '^' expr | atom
    atom    := NUMBER | 't' | 'pi' | 'e' | NAME '(' expr ')' | '(' expr ')'

`^` is right-associative and binds tighter than unary minus, so `-t^2` is
`-(t^2)` and `2^3^2` is `2^(3^2)`; the exponent may itself carry a unary
minus (`t^-2`). Functions: sin, cos, exp, ln, abs, sqrt.
"""
import logging
import math
import re
from dataclasses import dataclass

import numpy as np

from errors import (
    DomainViolation,
    EmptyExpressionError,
    ExprSyntaxError,
    NondifferentiablePoint,
    UnknownIdentifierError,
)

logger = logging.getLogger(__name__)

FUNCTIONS = ("sin", "cos", "exp", "ln", "abs", "sqrt")
CONSTANTS = {"pi": math.pi, "e": math.e}
VARIABLE = "t"

# Binding powers; prefix minus sits between the multiplicative operators and '^'
BINARY_BP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
PREFIX_MINUS_BP = 25


# ---------------------------------------------------------------------------
# Tree
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Unary:
    op: str  # 'neg' or one of FUNCTIONS
    arg: object


@dataclass(frozen=True)
class Binary:
    op: str  # one of BINARY_BP
    left: object
    right: object


@dataclass(frozen=True)
class FunctionSpec:
    """
    A parsed real function of one variable.

    Parameters:
    - root: Expression tree (Const, Var, Unary, Binary)
    - source_text: Text the tree was parsed from (or its serialization)
    """

    root: object
    source_text: str

    def __call__(self, t):
        return evaluate(self, t)

    def __str__(self):
        return self.source_text

    @property
    def is_constant(self):
        return not _has_variable(self.root)

    @classmethod
    def constant(cls, value):
        node = Const(float(value))
        return cls(node, serialize_node(node))

    @classmethod
    def power(cls, p):
        """t^p, the comparison function of the power-type bounds."""
        node = Binary("^", Var(), Const(float(p)))
        return cls(node, serialize_node(node))


@dataclass(frozen=True)
class DualValue:
    value: object
    deriv: object


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

TOKEN_PATTERN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number", "name", "op", "end"
    text: str
    offset: int

    @property
    def lbp(self):
        if self.kind == "op":
            return BINARY_BP.get(self.text, 0)
        return 0


def _byte_offset(text, index):
    return len(text[:index].encode("utf-8"))


def tokenize(text):
    """
    Split expression text into tokens carrying byte offsets.

    Returns a list of tokens ending with an 'end' token.
    """
    tokens = []
    index = 0
    while index < len(text):
        if text[index:].strip() == "":
            index = len(text)
            break
        match = TOKEN_PATTERN.match(text, index)
        if match is None or match.end() == index:
            stripped = index + (len(text[index:]) - len(text[index:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[stripped]!r}", _byte_offset(text, stripped))
        kind = match.lastgroup
        tokens.append(_Token(kind, match.group(kind), _byte_offset(text, match.start(kind))))
        index = match.end()
    tokens.append(_Token("end", "", _byte_offset(text, len(text))))
    return tokens


class _Parser:
    """Pratt parser over the token list."""

    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.position = 0

    @property
    def token(self):
        return self.tokens[self.position]

    def advance(self):
        token = self.token
        self.position += 1
        return token

    def expect(self, op):
        token = self.token
        if token.kind != "op" or token.text != op:
            found = "end of input" if token.kind == "end" else repr(token.text)
            raise ExprSyntaxError(f"expected '{op}', found {found}", token.offset)
        return self.advance()

    def expression(self, rbp=0):
        left = self.prefix(self.advance())
        while rbp < self.token.lbp:
            op = self.advance().text
            # right-associative '^' parses its right side one notch weaker
            right_bp = BINARY_BP[op] - 1 if op == "^" else BINARY_BP[op]
            left = Binary(op, left, self.expression(right_bp))
        return left

    def prefix(self, token):
        if token.kind == "number":
            return Const(float(token.text))
        if token.kind == "name":
            return self.name(token)
        if token.kind == "op" and token.text == "-":
            return Unary("neg", self.expression(PREFIX_MINUS_BP))
        if token.kind == "op" and token.text == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        if token.kind == "end":
            raise ExprSyntaxError("unexpected end of input", token.offset)
        raise ExprSyntaxError(f"unexpected {token.text!r}", token.offset)

    def name(self, token):
        if token.text == VARIABLE:
            return Var()
        if token.text in CONSTANTS:
            return Const(CONSTANTS[token.text])
        if token.text in FUNCTIONS:
            self.expect("(")
            arg = self.expression()
            self.expect(")")
            return Unary(token.text, arg)
        raise UnknownIdentifierError(token.text, token.offset)


def parse(text):
    """
    Parse expression text into a FunctionSpec.

    Parameters:
    - text: Expression in the grammar described in the module docstring

    Returns a FunctionSpec. Raises EmptyExpressionError, UnknownIdentifierError
    or ExprSyntaxError (with the byte offset of the failure).
    """
    if text is None or text.strip() == "":
        raise EmptyExpressionError()
    parser = _Parser(text)
    root = parser.expression()
    if parser.token.kind != "end":
        raise ExprSyntaxError(f"unexpected {parser.token.text!r}", parser.token.offset)
    return FunctionSpec(root, text)


def serialize_node(node):
    match node:
        case Const(value):
            text = repr(float(value))
            return f"({text})" if value < 0 or text.startswith("-") else text
        case Var():
            return VARIABLE
        case Unary("neg", arg):
            return f"(-{serialize_node(arg)})"
        case Unary(op, arg):
            return f"{op}({serialize_node(arg)})"
        case Binary(op, left, right):
            return f"({serialize_node(left)} {op} {serialize_node(right)})"
    raise TypeError(f"not an expression node: {node!r}")


def serialize(f):
    """Fully parenthesized text; parse(serialize(f)) evaluates identically to f."""
    return serialize_node(f.root)


def _has_variable(node):
    match node:
        case Var():
            return True
        case Const():
            return False
        case Unary(_, arg):
            return _has_variable(arg)
        case Binary(_, left, right):
            return _has_variable(left) or _has_variable(right)
    return False


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _first_bad(t, mask):
    points = np.broadcast_to(t, np.shape(mask))
    index = np.flatnonzero(mask)[0]
    return float(points.flat[index])


def _check(node, t, value, reason):
    bad = ~np.isfinite(value)
    if np.any(bad):
        raise DomainViolation(serialize_node(node), _first_bad(t, bad), reason)
    return value


def _guard(node, t, mask, reason):
    if np.any(mask):
        raise DomainViolation(serialize_node(node), _first_bad(t, np.broadcast_to(mask, np.shape(t))), reason)


def _value(node, t):
    match node:
        case Const(value):
            return np.full(np.shape(t), value)
        case Var():
            return t
        case Unary("neg", arg):
            return -_value(arg, t)
        case Unary(op, arg):
            u = _value(arg, t)
            if op == "ln":
                _guard(node, t, u <= 0, "logarithm of a nonpositive number")
            elif op == "sqrt":
                _guard(node, t, u < 0, "square root of a negative number")
            return _check(node, t, UNARY_VALUE[op](u), "overflow")
        case Binary(op, left, right):
            u = _value(left, t)
            v = _value(right, t)
            if op == "/":
                _guard(node, t, v == 0, "division by zero")
            return _check(node, t, BINARY_VALUE[op](u, v), "non-real or overflowing result")
    raise TypeError(f"not an expression node: {node!r}")


UNARY_VALUE = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "ln": np.log,
    "abs": np.abs,
    "sqrt": np.sqrt,
}

BINARY_VALUE = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.divide,
    "^": np.power,
}


def _as_points(t):
    return np.asarray(t, dtype=float)


def _unwrap(t, result):
    return float(result) if np.ndim(t) == 0 else np.asarray(result, dtype=float)


def evaluate(f, t):
    """
    Evaluate f at t.

    Parameters:
    - f: FunctionSpec
    - t: A float or an array of points

    Returns a float for scalar t, an ndarray otherwise. Raises DomainViolation
    naming the offending subexpression.
    """
    points = _as_points(t)
    with np.errstate(all="ignore"):
        return _unwrap(t, _value(f.root, points))


def _dual(node, t):
    match node:
        case Const(value):
            return np.full(np.shape(t), value), np.zeros(np.shape(t))
        case Var():
            return t, np.ones(np.shape(t))
        case Unary("neg", arg):
            v, d = _dual(arg, t)
            return -v, -d
        case Unary("abs", arg):
            v, d = _dual(arg, t)
            if np.any(v == 0):
                raise NondifferentiablePoint(serialize_node(node), _first_bad(t, np.broadcast_to(v == 0, np.shape(t))))
            return np.abs(v), np.sign(v) * d
        case Unary(op, arg):
            v, d = _dual(arg, t)
            if op == "ln":
                _guard(node, t, v <= 0, "logarithm of a nonpositive number")
            elif op == "sqrt":
                _guard(node, t, v < 0, "square root of a negative number")
            value = _check(node, t, UNARY_VALUE[op](v), "overflow")
            deriv = UNARY_DERIV[op](v, value) * d
            return value, _check_deriv(node, t, deriv)
        case Binary(op, left, right):
            u, du = _dual(left, t)
            v, dv = _dual(right, t)
            if op == "/":
                _guard(node, t, v == 0, "division by zero")
            value = _check(node, t, BINARY_VALUE[op](u, v), "non-real or overflowing result")
            if op == "+":
                deriv = du + dv
            elif op == "-":
                deriv = du - dv
            elif op == "*":
                deriv = du * v + u * dv
            elif op == "/":
                deriv = (du * v - u * dv) / (v * v)
            elif _has_variable(right):
                _guard(node, t, u <= 0, "variable exponent needs a positive base")
                deriv = value * (dv * np.log(u) + v * du / u)
            else:
                # constant exponent: d(u^c) = c u^(c-1) u'
                deriv = np.where(v == 0, 0.0, v * np.power(u, v - 1) * du)
            return value, _check_deriv(node, t, deriv)
    raise TypeError(f"not an expression node: {node!r}")


UNARY_DERIV = {
    "sin": lambda v, value: np.cos(v),
    "cos": lambda v, value: -np.sin(v),
    "exp": lambda v, value: value,
    "ln": lambda v, value: 1.0 / v,
    "sqrt": lambda v, value: 0.5 / value,
}


def _check_deriv(node, t, deriv):
    bad = ~np.isfinite(deriv)
    if np.any(bad):
        raise NondifferentiablePoint(serialize_node(node), _first_bad(t, bad))
    return deriv


def evaluate_dual(f, t):
    """
    Evaluate f and its first derivative at t by forward-mode differentiation.

    Parameters:
    - f: FunctionSpec
    - t: A float or an array of points

    Returns a DualValue whose fields are floats for scalar t and arrays
    otherwise. Raises DomainViolation outside the domain and
    NondifferentiablePoint where the value exists but f' does not.
    """
    points = _as_points(t)
    with np.errstate(all="ignore"):
        value, deriv = _dual(f.root, points)
    return DualValue(_unwrap(t, value), _unwrap(t, deriv))


def derivative(f, t):
    return evaluate_dual(f, t).deriv


def as_function(f):
    """Accept expression text or a FunctionSpec; return a FunctionSpec."""
    if isinstance(f, FunctionSpec):
        return f
    return parse(f)
