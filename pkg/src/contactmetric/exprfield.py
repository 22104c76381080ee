"""Scalar-field expressions on a 3-d chart and their second-order jets.

Expressions are small immutable ASTs built by :func:`parse`.  They are
evaluated with :func:`eval_jet2`, which pushes a truncated Taylor expansion
(value, gradient, Hessian) through every node, so first and second partial
derivatives come out exact up to roundoff.

Example::

    >>> f = parse("x^2 + B*exp(-z)", params={"B"})
    >>> j = eval_jet2(f, (0.0, 0.0, 0.0), {"B": 2.0})
    >>> j.value, tuple(j.gradient)
    (2.0, (0.0, 0.0, -2.0))
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

import numpy as np

from .errors import DomainError, ParseError, UnboundParameter, UnknownIdentifier

COORDS = ("x", "y", "z")
FUNCTIONS = ("exp", "sin", "cos", "sqrt", "log")

# Hessian storage order: xx, xy, xz, yy, yz, zz
_HIDX = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


# --------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Coord:
    index: int  # 0, 1, 2 for x, y, z


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


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
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: "Expr"


@dataclass(frozen=True)
class Func:
    name: str
    arg: "Expr"


Expr = Union[Const, Coord, Param, Neg, Add, Sub, Mul, Div, Pow, Func]
_BINARY = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


def parameters_of(expr: Expr) -> set[str]:
    """Names of all parameters referenced by ``expr``."""
    if isinstance(expr, Param):
        return {expr.name}
    if isinstance(expr, (Const, Coord)):
        return set()
    if isinstance(expr, (Neg, Func)):
        return parameters_of(expr.arg)
    if isinstance(expr, Pow):
        return parameters_of(expr.base) | parameters_of(expr.exponent)
    return parameters_of(expr.left) | parameters_of(expr.right)


# --------------------------------------------------------------------------
# Parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {source[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("eof", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str, params: Iterable[str]):
        self.tokens = _tokenize(source)
        self.pos = 0
        self.params = frozenset(params)

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str):
        kind, value, offset = self.peek()
        if value != text or kind != "op":
            found = "end of input" if kind == "eof" else repr(value)
            raise ParseError(f"expected {text!r}, found {found}", offset)
        return self.take()

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.power())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return Pow(base, self.factor())
        return base

    def atom(self) -> Expr:
        kind, value, offset = self.take()
        if kind == "num":
            return Const(float(value))
        if kind == "ident":
            if self.peek()[:2] == ("op", "("):
                if value not in FUNCTIONS:
                    raise UnknownIdentifier(f"unknown function {value!r}", offset)
                self.take()
                arg = self.expr()
                self.expect(")")
                return Func(value, arg)
            if value in COORDS:
                return Coord(COORDS.index(value))
            if value in self.params:
                return Param(value)
            raise UnknownIdentifier(f"unknown identifier {value!r}", offset)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"unexpected {found}", offset)


def parse(source: str, params: Iterable[str] = ()) -> Expr:
    """Parse ``source`` into an expression tree.

    Identifiers must be a coordinate (``x``, ``y``, ``z``), one of ``params``,
    or a function name applied to a parenthesised argument.
    """
    if not source.strip():
        raise ParseError("empty expression", 0)
    p = _Parser(source, params)
    node = p.expr()
    kind, value, offset = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {value!r}", offset)
    return node


# --------------------------------------------------------------------------
# Printer


def _prec(node: Expr) -> int:
    if isinstance(node, (Add, Sub)):
        return 1
    if isinstance(node, (Mul, Div)):
        return 2
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def to_source(node: Expr) -> str:
    """Render ``node`` as text that :func:`parse` maps back to the same tree."""
    if isinstance(node, Const):
        return repr(float(node.value))
    if isinstance(node, Coord):
        return COORDS[node.index]
    if isinstance(node, Param):
        return node.name
    if isinstance(node, Func):
        return f"{node.name}({to_source(node.arg)})"
    if isinstance(node, Neg):
        # the grammar only allows '-' in front of a power or atom
        inner = to_source(node.arg)
        return f"-{inner}" if _prec(node.arg) >= 4 else f"-({inner})"
    if isinstance(node, Pow):
        base = to_source(node.base)
        if _prec(node.base) < 5:
            base = f"({base})"
        exp = to_source(node.exponent)
        if _prec(node.exponent) < 3:
            exp = f"({exp})"
        return f"{base}^{exp}"
    op = _BINARY[type(node)]
    p = _prec(node)
    left = to_source(node.left)
    if _prec(node.left) < p:
        left = f"({left})"
    right = to_source(node.right)
    # left-associative: an equal-precedence right child needs parentheses
    if _prec(node.right) <= p:
        right = f"({right})"
    return f"{left} {op} {right}"


# --------------------------------------------------------------------------
# Jets


class Jet2:
    """Second-order jet of a scalar field: value, gradient and Hessian.

    The Hessian is stored as its six independent components so it is
    symmetric by construction.
    """

    __slots__ = ("v", "g", "h")

    def __init__(self, v: float, g=(0.0, 0.0, 0.0), h=(0.0,) * 6):
        self.v = v
        self.g = g
        self.h = h

    @classmethod
    def constant(cls, v: float) -> "Jet2":
        return cls(float(v))

    @classmethod
    def coordinate(cls, index: int, v: float) -> "Jet2":
        g = [0.0, 0.0, 0.0]
        g[index] = 1.0
        return cls(float(v), tuple(g))

    @property
    def value(self) -> float:
        return self.v

    @property
    def gradient(self) -> np.ndarray:
        return np.array(self.g)

    @property
    def hessian(self) -> np.ndarray:
        H = np.empty((3, 3))
        for c, (i, j) in zip(self.h, _HIDX):
            H[i, j] = H[j, i] = c
        return H

    def is_constant(self) -> bool:
        return not any(self.g) and not any(self.h)

    def __add__(self, o: "Jet2") -> "Jet2":
        a, b = self.g, o.g
        p, q = self.h, o.h
        return Jet2(
            self.v + o.v,
            (a[0] + b[0], a[1] + b[1], a[2] + b[2]),
            tuple(p[i] + q[i] for i in range(6)),
        )

    def __sub__(self, o: "Jet2") -> "Jet2":
        a, b = self.g, o.g
        p, q = self.h, o.h
        return Jet2(
            self.v - o.v,
            (a[0] - b[0], a[1] - b[1], a[2] - b[2]),
            tuple(p[i] - q[i] for i in range(6)),
        )

    def __neg__(self) -> "Jet2":
        return Jet2(-self.v, tuple(-c for c in self.g), tuple(-c for c in self.h))

    def __mul__(self, o: "Jet2") -> "Jet2":
        u, w = self.v, o.v
        a, b = self.g, o.g
        p, q = self.h, o.h
        g = (u * b[0] + w * a[0], u * b[1] + w * a[1], u * b[2] + w * a[2])
        h = tuple(
            u * q[n] + w * p[n] + a[i] * b[j] + a[j] * b[i]
            for n, (i, j) in enumerate(_HIDX)
        )
        return Jet2(u * w, g, h)

    def chain(self, f0: float, f1: float, f2: float) -> "Jet2":
        """Compose with a univariate function given f, f', f'' at self.value."""
        a = self.g
        g = (f1 * a[0], f1 * a[1], f1 * a[2])
        h = tuple(f1 * self.h[n] + f2 * a[i] * a[j] for n, (i, j) in enumerate(_HIDX))
        return Jet2(f0, g, h)

    def reciprocal(self) -> "Jet2":
        u = self.v
        if u == 0.0:
            raise DomainError("division by zero")
        r = 1.0 / u
        return self.chain(r, -r * r, 2.0 * r * r * r)

    def __truediv__(self, o: "Jet2") -> "Jet2":
        return self * o.reciprocal()

    def __repr__(self) -> str:
        return f"Jet2(value={self.v!r}, gradient={self.g!r}, hessian={self.h!r})"


def _ipow(base: Jet2, n: int) -> Jet2:
    if n == 0:
        return Jet2.constant(1.0)
    if n < 0:
        return _ipow(base, -n).reciprocal()
    result = None
    sq = base
    while n:
        if n & 1:
            result = sq if result is None else result * sq
        n >>= 1
        if n:
            sq = sq * sq
    return result


def _func(name: str, u: Jet2) -> Jet2:
    v = u.v
    if name == "exp":
        e = math.exp(v)
        return u.chain(e, e, e)
    if name == "sin":
        s, c = math.sin(v), math.cos(v)
        return u.chain(s, c, -s)
    if name == "cos":
        s, c = math.sin(v), math.cos(v)
        return u.chain(c, -s, -c)
    if name == "sqrt":
        if v <= 0.0:
            raise DomainError(f"sqrt of non-positive value {v!r}")
        r = math.sqrt(v)
        return u.chain(r, 0.5 / r, -0.25 / (r * v))
    if name == "log":
        if v <= 0.0:
            raise DomainError(f"log of non-positive value {v!r}")
        return u.chain(math.log(v), 1.0 / v, -1.0 / (v * v))
    raise DomainError(f"unknown function {name!r}")


def _param(name: str, params: Mapping[str, float]) -> float:
    try:
        return float(params[name])
    except KeyError:
        raise UnboundParameter(f"parameter {name!r} is not bound") from None


def _jet(node: Expr, p, params) -> Jet2:
    t = type(node)
    if t is Add:
        return _jet(node.left, p, params) + _jet(node.right, p, params)
    if t is Sub:
        return _jet(node.left, p, params) - _jet(node.right, p, params)
    if t is Mul:
        return _jet(node.left, p, params) * _jet(node.right, p, params)
    if t is Div:
        return _jet(node.left, p, params) / _jet(node.right, p, params)
    if t is Const:
        return Jet2(node.value)
    if t is Coord:
        return Jet2.coordinate(node.index, p[node.index])
    if t is Param:
        return Jet2(_param(node.name, params))
    if t is Neg:
        return -_jet(node.arg, p, params)
    if t is Func:
        return _func(node.name, _jet(node.arg, p, params))
    if t is Pow:
        base = _jet(node.base, p, params)
        ex = _jet(node.exponent, p, params)
        if ex.is_constant():
            r = ex.v
            if r == int(r) and abs(r) < 2**31:
                return _ipow(base, int(r))
            b = base.v
            if b <= 0.0:
                raise DomainError(f"non-integer power of non-positive base {b!r}")
            return base.chain(b**r, r * b ** (r - 1.0), r * (r - 1.0) * b ** (r - 2.0))
        if base.v <= 0.0:
            raise DomainError(f"variable power of non-positive base {base.v!r}")
        return _func("exp", ex * _func("log", base))
    raise TypeError(f"not an expression node: {node!r}")


def eval_jet2(f: Expr, p, params: Mapping[str, float] | None = None) -> Jet2:
    """Value, gradient and Hessian of ``f`` at chart point ``p``."""
    p = tuple(float(c) for c in p)
    if not all(math.isfinite(c) for c in p):
        raise DomainError(f"non-finite point {p!r}")
    return _jet(f, p, params or {})


def evaluate(f: Expr, p, params: Mapping[str, float] | None = None) -> float:
    """Plain float evaluation, no derivatives.

    Kept separate from the jet path so finite-difference oracles do not share
    code with it.
    """
    params = params or {}

    def ev(node):
        t = type(node)
        if t is Const:
            return node.value
        if t is Coord:
            return float(p[node.index])
        if t is Param:
            return _param(node.name, params)
        if t is Neg:
            return -ev(node.arg)
        if t is Add:
            return ev(node.left) + ev(node.right)
        if t is Sub:
            return ev(node.left) - ev(node.right)
        if t is Mul:
            return ev(node.left) * ev(node.right)
        if t is Div:
            d = ev(node.right)
            if d == 0.0:
                raise DomainError("division by zero")
            return ev(node.left) / d
        if t is Pow:
            b, e = ev(node.base), ev(node.exponent)
            if e != int(e) and b <= 0.0:
                raise DomainError("non-integer power of non-positive base")
            if b == 0.0 and e < 0:
                raise DomainError("negative power of zero")
            return b ** int(e) if e == int(e) else b**e
        if t is Func:
            a = ev(node.arg)
            if node.name in ("sqrt", "log") and a <= 0.0:
                raise DomainError(f"{node.name} of non-positive value")
            return getattr(math, node.name)(a)
        raise TypeError(node)

    return ev(f)
