#!/usr/bin/env python3
"""
Expression language for geometric data.

Metric components, Lee forms, map components, vector fields and endomorphism
fields are all declared as closed-form scalar expressions of the chart
coordinates. This module parses them into an immutable AST and evaluates
order-2 jets (value, gradient, symmetric Hessian) by forward-mode
differentiation.

Grammar::

    expression := term (('+' | '-') term)*
    term       := factor (('*' | '/') factor)*
    factor     := atom ('^' atom)?
    atom       := number | function '(' expression ')' | name
                | '(' expression ')' | '-' atom

Reserved functions: sin cos tan sinh cosh tanh exp log sqrt atan.
Reserved constants: pi, e.

Example:
    >>> ast = parse("x1^2 + sin(x2)", ("x1", "x2"))
    >>> jet = eval_jet2(ast, [1.0, 0.0])
    >>> jet.value, jet.gradient
    (1.0, array([2., 1.]))

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Callable, Dict, Sequence, Tuple, Union

import numpy as np
from arpeggio import EOF, NoMatch, Optional, ParserPython, PTNodeVisitor, ZeroOrMore, visit_parse_tree
from arpeggio import RegExMatch as _

from .errors import ArityError, DomainError, ExpressionSyntaxError, UnknownIdentifierError


FUNCTIONS = ("sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt", "atan")
CONSTANTS = {"pi": math.pi, "e": math.e}
RESERVED = frozenset(FUNCTIONS) | frozenset(CONSTANTS)


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

class Expr:
    """Base class of AST nodes. Nodes are immutable and hashable."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_expression(self)


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Const(Expr):
    name: str

    @property
    def value(self) -> float:
        return CONSTANTS[self.name]


@dataclass(frozen=True)
class Var(Expr):
    name: str
    index: int


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Call(Expr):
    function: str
    argument: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


def print_expression(e: Expr) -> str:
    """Fully parenthesised text form; parsing it back gives the same AST."""
    if isinstance(e, Num):
        return repr(float(e.value)) if e.value >= 0 else f"(-{repr(-float(e.value))})"
    if isinstance(e, (Const, Var)):
        return e.name
    if isinstance(e, Neg):
        return f"(-{print_expression(e.operand)})"
    if isinstance(e, Call):
        return f"{e.function}({print_expression(e.argument)})"
    if isinstance(e, BinOp):
        return f"({print_expression(e.left)} {e.op} {print_expression(e.right)})"
    if isinstance(e, Pow):
        return f"({print_expression(e.base)}^{print_expression(e.exponent)})"
    raise TypeError(f"not an expression node: {e!r}")


def variables(e: Expr) -> frozenset:
    """Names of the coordinates an expression depends on."""
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, Neg):
        return variables(e.operand)
    if isinstance(e, Call):
        return variables(e.argument)
    if isinstance(e, BinOp):
        return variables(e.left) | variables(e.right)
    if isinstance(e, Pow):
        return variables(e.base) | variables(e.exponent)
    return frozenset()


def is_constant(e: Expr) -> bool:
    return not variables(e)


def constant_value(e: Expr) -> float:
    """Value of a coordinate-free expression."""
    return evaluate(e, ())


# ---------------------------------------------------------------------------
# Grammar
# ---------------------------------------------------------------------------

def number():
    return _(r'\d+\.\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|\d+(?:[eE][-+]?\d+)?')


def function_name():
    return _(r'[a-zA-Z][a-zA-Z0-9_]*(?=\s*\()')


def name():
    return _(r'[a-zA-Z][a-zA-Z0-9_]*')


def add_op():
    return _(r'[+\-]')


def mul_op():
    return _(r'[*/]')


def pow_op():
    return _(r'\^')


def call():
    return function_name, "(", expression, ZeroOrMore(",", expression), ")"


def group():
    return "(", expression, ")"


def negation():
    return "-", atom


def atom():
    return [number, call, name, group, negation]


def factor():
    return atom, Optional(pow_op, atom)


def term():
    return factor, ZeroOrMore(mul_op, factor)


def expression():
    return term, ZeroOrMore(add_op, term)


def formula():
    return expression, EOF


@dataclass(frozen=True)
class _Operator:
    symbol: str
    position: int


@dataclass(frozen=True)
class _FunctionName:
    name: str
    position: int


def _expressions(children) -> list:
    return [c for c in children if isinstance(c, Expr)]


class _AstBuilder(PTNodeVisitor):
    """Turns an arpeggio parse tree into AST nodes, resolving names against the chart."""

    def __init__(self, coords: Tuple[str, ...]):
        super().__init__()
        self.coords = coords

    def visit_number(self, node, children):
        return Num(float(node.value))

    def visit_function_name(self, node, children):
        return _FunctionName(node.value, node.position)

    def visit_name(self, node, children):
        ident = node.value
        if ident in self.coords:
            return Var(ident, self.coords.index(ident))
        if ident in CONSTANTS:
            return Const(ident)
        raise UnknownIdentifierError(ident, node.position)

    def visit_add_op(self, node, children):
        return _Operator(node.value, node.position)

    visit_mul_op = visit_add_op
    visit_pow_op = visit_add_op

    def visit_call(self, node, children):
        fname = next(c for c in children if isinstance(c, _FunctionName))
        if fname.name not in FUNCTIONS:
            raise UnknownIdentifierError(fname.name, fname.position)
        args = _expressions(children)
        if len(args) != 1:
            raise ArityError(fname.name, len(args), fname.position)
        return Call(fname.name, args[0])

    def visit_group(self, node, children):
        return _expressions(children)[0]

    def visit_negation(self, node, children):
        return Neg(_expressions(children)[0])

    def visit_atom(self, node, children):
        return _expressions(children)[0]

    def visit_factor(self, node, children):
        parts = _expressions(children)
        if len(parts) == 1:
            return parts[0]
        base, exponent = parts
        if not is_constant(exponent):
            op = next(c for c in children if isinstance(c, _Operator))
            raise ExpressionSyntaxError("exponent must be a constant", op.position + 1)
        return Pow(base, exponent)

    def _fold(self, node, children):
        items = [c for c in children if isinstance(c, (Expr, _Operator))]
        result = items[0]
        for i in range(1, len(items), 2):
            result = BinOp(items[i].symbol, result, items[i + 1])
        return result

    visit_term = _fold
    visit_expression = _fold

    def visit_formula(self, node, children):
        return _expressions(children)[0]


_PARSER = None
_PARSER_LOCK = threading.Lock()
_AST_CACHE: "OrderedDict[Tuple[str, Tuple[str, ...]], Expr]" = OrderedDict()
_AST_CACHE_LOCK = threading.Lock()
_AST_CACHE_MAX_SIZE = 4096


def _get_parser() -> ParserPython:
    global _PARSER
    with _PARSER_LOCK:
        if _PARSER is None:
            _PARSER = ParserPython(formula, skipws=True)
    return _PARSER


def parse(text: str, coords: Sequence[str]) -> Expr:
    """
    Parse expression text over the given chart coordinates.

    Args:
        text (str): Expression source, e.g. ``"x1^2 + sin(x2)"``.
        coords (Sequence[str]): Coordinate names of the owning chart.

    Returns:
        Expr: Immutable AST whose variables are drawn from ``coords``.

    Raises:
        ExpressionSyntaxError: Text outside the grammar; carries the offset.
        UnknownIdentifierError: A name that is not a coordinate or constant.
        ArityError: A reserved function with other than one argument.
    """
    if not isinstance(text, str) or not text.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    coords = tuple(coords)
    key = (text, coords)

    with _AST_CACHE_LOCK:
        if key in _AST_CACHE:
            _AST_CACHE.move_to_end(key)
            return _AST_CACHE[key]

    parser = _get_parser()
    with _PARSER_LOCK:
        try:
            tree = parser.parse(text)
        except NoMatch as exc:
            raise ExpressionSyntaxError("syntax error", exc.position) from None
    ast = visit_parse_tree(tree, _AstBuilder(coords))

    with _AST_CACHE_LOCK:
        if len(_AST_CACHE) >= _AST_CACHE_MAX_SIZE:
            _AST_CACHE.popitem(last=False)
        _AST_CACHE[key] = ast
    return ast


# ---------------------------------------------------------------------------
# Symbolic differentiation (no simplification)
# ---------------------------------------------------------------------------

ZERO = Num(0.0)
ONE = Num(1.0)


def _mul(a: Expr, b: Expr) -> Expr:
    return BinOp("*", a, b)


def _function_derivative(fname: str, a: Expr) -> Expr:
    if fname == "sin":
        return Call("cos", a)
    if fname == "cos":
        return Neg(Call("sin", a))
    if fname == "tan":
        return BinOp("/", ONE, Pow(Call("cos", a), Num(2.0)))
    if fname == "sinh":
        return Call("cosh", a)
    if fname == "cosh":
        return Call("sinh", a)
    if fname == "tanh":
        return BinOp("-", ONE, Pow(Call("tanh", a), Num(2.0)))
    if fname == "exp":
        return Call("exp", a)
    if fname == "log":
        return BinOp("/", ONE, a)
    if fname == "sqrt":
        return BinOp("/", ONE, _mul(Num(2.0), Call("sqrt", a)))
    if fname == "atan":
        return BinOp("/", ONE, BinOp("+", ONE, Pow(a, Num(2.0))))
    raise UnknownIdentifierError(fname, 0)


def derivative(e: Expr, var: str) -> Expr:
    """Symbolic partial derivative of ``e`` with respect to coordinate ``var``."""
    if isinstance(e, (Num, Const)):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == var else ZERO
    if isinstance(e, Neg):
        return Neg(derivative(e.operand, var))
    if isinstance(e, Call):
        return _mul(_function_derivative(e.function, e.argument), derivative(e.argument, var))
    if isinstance(e, BinOp):
        da, db = derivative(e.left, var), derivative(e.right, var)
        if e.op in "+-":
            return BinOp(e.op, da, db)
        if e.op == "*":
            return BinOp("+", _mul(da, e.right), _mul(e.left, db))
        return BinOp("/", BinOp("-", _mul(da, e.right), _mul(e.left, db)), _mul(e.right, e.right))
    if isinstance(e, Pow):
        lowered = Pow(e.base, BinOp("-", e.exponent, ONE))
        return _mul(_mul(e.exponent, lowered), derivative(e.base, var))
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# Order-2 jets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Jet2:
    """Value, gradient and symmetric Hessian of a scalar at a point."""

    value: float
    gradient: np.ndarray
    hessian: np.ndarray

    def __post_init__(self):
        gradient = np.array(self.gradient, dtype=float)
        hessian = np.array(self.hessian, dtype=float)
        hessian = 0.5 * (hessian + hessian.T)
        gradient.flags.writeable = False
        hessian.flags.writeable = False
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "gradient", gradient)
        object.__setattr__(self, "hessian", hessian)

    @property
    def dim(self) -> int:
        return self.gradient.shape[0]

    @classmethod
    def constant(cls, value: float, m: int) -> "Jet2":
        return cls(value, np.zeros(m), np.zeros((m, m)))

    @classmethod
    def coordinate(cls, index: int, point: Sequence[float]) -> "Jet2":
        m = len(point)
        gradient = np.zeros(m)
        gradient[index] = 1.0
        return cls(point[index], gradient, np.zeros((m, m)))


def _describe(node, default: str) -> str:
    if isinstance(node, Expr):
        return print_expression(node)
    return node or default


def _compose(a: Jet2, f0: float, f1: float, f2: float) -> Jet2:
    """Chain rule to order two for a scalar function with derivatives f1, f2 at a.value."""
    return Jet2(f0, f1 * a.gradient, f1 * a.hessian + f2 * np.outer(a.gradient, a.gradient))


def jet_arith(a: Jet2, b: Jet2, op: str, node=None, point=None) -> Jet2:
    """
    Combine two jets with one of ``+ - * /``.

    Raises:
        DomainError: Division by a jet whose value is zero.
    """
    if a.dim != b.dim:
        raise ValueError(f"jet dimensions differ: {a.dim} vs {b.dim}")
    if op == "+":
        return Jet2(a.value + b.value, a.gradient + b.gradient, a.hessian + b.hessian)
    if op == "-":
        return Jet2(a.value - b.value, a.gradient - b.gradient, a.hessian - b.hessian)
    if op == "*":
        cross = np.outer(a.gradient, b.gradient)
        return Jet2(
            a.value * b.value,
            a.value * b.gradient + b.value * a.gradient,
            a.hessian * b.value + b.hessian * a.value + cross + cross.T,
        )
    if op == "/":
        if b.value == 0.0:
            raise DomainError(_describe(node, "division"), point)
        inverse = _compose(b, 1.0 / b.value, -1.0 / b.value ** 2, 2.0 / b.value ** 3)
        return jet_arith(a, inverse, "*")
    raise ValueError(f"unknown operator {op!r}")


def _scalar_derivatives(fname: str, v: float) -> Tuple[float, float, float]:
    if fname == "sin":
        return math.sin(v), math.cos(v), -math.sin(v)
    if fname == "cos":
        return math.cos(v), -math.sin(v), -math.cos(v)
    if fname == "tan":
        c = math.cos(v)
        if c == 0.0:
            raise ValueError
        t = math.tan(v)
        return t, 1.0 / c ** 2, 2.0 * t / c ** 2
    if fname == "sinh":
        return math.sinh(v), math.cosh(v), math.sinh(v)
    if fname == "cosh":
        return math.cosh(v), math.sinh(v), math.cosh(v)
    if fname == "tanh":
        t = math.tanh(v)
        return t, 1.0 - t * t, -2.0 * t * (1.0 - t * t)
    if fname == "exp":
        ev = math.exp(v)
        return ev, ev, ev
    if fname == "log":
        if v <= 0.0:
            raise ValueError
        return math.log(v), 1.0 / v, -1.0 / v ** 2
    if fname == "sqrt":
        if v <= 0.0:
            raise ValueError
        s = math.sqrt(v)
        return s, 0.5 / s, -0.25 / (s * v)
    if fname == "atan":
        q = 1.0 + v * v
        return math.atan(v), 1.0 / q, -2.0 * v / q ** 2
    raise UnknownIdentifierError(fname, 0)


def jet_compose(fname: str, a: Jet2, node=None, point=None) -> Jet2:
    """Apply a reserved unary function to a jet."""
    try:
        f0, f1, f2 = _scalar_derivatives(fname, a.value)
    except (ValueError, OverflowError):
        raise DomainError(_describe(node, fname), point) from None
    return _compose(a, f0, f1, f2)


def jet_power(a: Jet2, p: float, node=None, point=None) -> Jet2:
    """Raise a jet to a constant power; integer powers use repeated multiplication."""
    if float(p).is_integer():
        n = int(abs(p))
        result = Jet2.constant(1.0, a.dim)
        square = a
        while n:
            if n & 1:
                result = jet_arith(result, square, "*")
            n >>= 1
            if n:
                square = jet_arith(square, square, "*")
        if p < 0:
            return jet_arith(Jet2.constant(1.0, a.dim), result, "/", node, point)
        return result
    if a.value <= 0.0:
        raise DomainError(_describe(node, "power"), point)
    v = a.value
    return _compose(a, v ** p, p * v ** (p - 1.0), p * (p - 1.0) * v ** (p - 2.0))


def eval_jet2(e: Expr, point: Sequence[float]) -> Jet2:
    """
    Evaluate value, gradient and Hessian of an expression at a chart point.

    Raises:
        DomainError: Naming the offending sub-expression and the point.
    """
    x = np.asarray(point, dtype=float)
    return _jet(e, x)


def _jet(e: Expr, x: np.ndarray) -> Jet2:
    m = x.shape[0]
    if isinstance(e, Num):
        return Jet2.constant(e.value, m)
    if isinstance(e, Const):
        return Jet2.constant(e.value, m)
    if isinstance(e, Var):
        return Jet2.coordinate(e.index, x)
    if isinstance(e, Neg):
        a = _jet(e.operand, x)
        return Jet2(-a.value, -a.gradient, -a.hessian)
    if isinstance(e, Call):
        return jet_compose(e.function, _jet(e.argument, x), e, x)
    if isinstance(e, BinOp):
        return jet_arith(_jet(e.left, x), _jet(e.right, x), e.op, e, x)
    if isinstance(e, Pow):
        return jet_power(_jet(e.base, x), constant_value(e.exponent), e, x)
    raise TypeError(f"not an expression node: {e!r}")


_UNARY: Dict[str, Callable[[float], float]] = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan,
    "sinh": math.sinh, "cosh": math.cosh, "tanh": math.tanh,
    "exp": math.exp, "log": math.log, "sqrt": math.sqrt, "atan": math.atan,
}


def evaluate(e: Expr, point: Sequence[float]) -> float:
    """Value only; same domain rules as :func:`eval_jet2`."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return float(point[e.index])
    if isinstance(e, Neg):
        return -evaluate(e.operand, point)
    if isinstance(e, Call):
        v = evaluate(e.argument, point)
        if (e.function in ("log", "sqrt") and v <= 0.0) or (e.function == "tan" and math.cos(v) == 0.0):
            raise DomainError(print_expression(e), point)
        try:
            return _UNARY[e.function](v)
        except OverflowError:
            raise DomainError(print_expression(e), point) from None
    if isinstance(e, BinOp):
        a, b = evaluate(e.left, point), evaluate(e.right, point)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if b == 0.0:
            raise DomainError(print_expression(e), point)
        return a / b
    if isinstance(e, Pow):
        base, p = evaluate(e.base, point), constant_value(e.exponent)
        if float(p).is_integer():
            if p < 0 and base == 0.0:
                raise DomainError(print_expression(e), point)
            return base ** int(p)
        if base <= 0.0:
            raise DomainError(print_expression(e), point)
        return base ** p
    raise TypeError(f"not an expression node: {e!r}")


ExpressionLike = Union[str, float, int, Expr]


def as_expression(value: ExpressionLike, coords: Sequence[str]) -> Expr:
    """Accept text, numbers or ready ASTs wherever geometric data is declared."""
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float)):
        return Num(float(value)) if value >= 0 else Neg(Num(float(-value)))
    return parse(str(value), coords)
