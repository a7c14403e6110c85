"""A small expression language for scalar fields and mappings.

Grammar (precedence ``^`` > unary minus > ``* /`` > ``+ -``)::

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := "-" unary | power
    power    := atom ("^" exponent)?
    exponent := ["-"] INT ("^" exponent)?
    atom     := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"

Numbers are integers, ``p/q`` rationals written without spaces, or decimal
literals; decimals force float evaluation.  Error offsets are 1-based
character columns.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .numeric import (
    DimensionMismatch,
    EvalDomainError,
    Point,
    Scalar,
    as_point,
    format_scalar,
)
from .polynomial import Polynomial

BUILTINS = ("sin", "cos", "exp", "log", "abs", "sqrt")


class ExprError(ValueError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        exp = f" (expected one of: {' '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{exp}")


class UnknownIdentifier(ExprError):
    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown identifier {name!r} at offset {offset}")


class ArityError(ExprError):
    pass


class NotPolynomial(ExprError):
    def __init__(self, node: Expr, reason: str):
        self.node = node
        super().__init__(f"not polynomial: {to_source(node)} ({reason})")


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: Scalar


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Neg:
    arg: Expr


@dataclass(frozen=True)
class Add:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class PowInt:
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Call:
    name: str
    arg: Expr


Expr = Union[Const, Var, Neg, Add, Sub, Mul, Div, PowInt, Call]


def default_names(dim: int) -> list[str]:
    if dim <= 3:
        return ["x", "y", "z"][:dim]
    return [f"x{i + 1}" for i in range(dim)]


# -- lexer -------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<float>(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<rational>\d+/\d+(?![\d.eE]))
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    offset: int  # 1-based


def tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            if kind == "rational" and int(m.group().split("/")[1]) == 0:
                raise ExprSyntaxError("zero denominator", pos + 1)
            toks.append(_Tok(kind, m.group(), pos + 1))
        pos = m.end()
    toks.append(_Tok("end", "", len(src) + 1))
    return toks


# -- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, src: str, names: Sequence[str]):
        self.toks = tokenize(src)
        self.i = 0
        self.names = list(names)

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at_op(self, *ops) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def expect_op(self, op: str) -> _Tok:
        if not self.at_op(op):
            raise ExprSyntaxError(f"unexpected {self._describe()}", self.tok.offset, {op})
        return self.take()

    def _describe(self) -> str:
        return "end of input" if self.tok.kind == "end" else repr(self.tok.text)

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {self._describe()}", self.tok.offset, {"+", "-", "*", "/", "^", "end"})
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.at_op("+", "-"):
            op = self.take().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.at_op("*", "/"):
            op = self.take().text
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self) -> Expr:
        if self.at_op("-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at_op("^"):
            self.take()
            return PowInt(base, self.exponent())
        return base

    def exponent(self) -> int:
        sign = 1
        if self.at_op("-"):
            self.take()
            sign = -1
        if self.tok.kind != "int":
            raise ExprSyntaxError(
                f"integer exponent expected, got {self._describe()}", self.tok.offset, {"integer"}
            )
        value = int(self.take().text)
        if self.at_op("^"):
            self.take()
            inner = self.exponent()
            if inner < 0:
                raise ExprSyntaxError("negative exponent in an exponent tower", self.tok.offset)
            value = value**inner
        return sign * value

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "int":
            self.take()
            return Const(Fraction(int(t.text)))
        if t.kind == "rational":
            self.take()
            p, q = t.text.split("/")
            return Const(Fraction(int(p), int(q)))
        if t.kind == "float":
            self.take()
            return Const(float(t.text))
        if t.kind == "ident":
            return self.identifier()
        if self.at_op("("):
            self.take()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(f"unexpected {self._describe()}", t.offset, {"number", "identifier", "(", "-"})

    def identifier(self) -> Expr:
        t = self.take()
        name = t.text
        if name in BUILTINS:
            if not self.at_op("("):
                raise ArityError(f"{name} expects one parenthesised argument (offset {t.offset})")
            self.take()
            args = [self.expr()]
            while self.at_op(","):
                self.take()
                args.append(self.expr())
            self.expect_op(")")
            if len(args) != 1:
                raise ArityError(f"{name} takes 1 argument, got {len(args)} (offset {t.offset})")
            return Call(name, args[0])
        if name in self.names:
            if self.at_op("("):
                raise ArityError(f"variable {name!r} is not a function (offset {t.offset})")
            return Var(self.names.index(name))
        raise UnknownIdentifier(name, t.offset)


def parse(src: str, dim: int | None = None, var_names: Sequence[str] | None = None) -> Expr:
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 1, {"number", "identifier", "(", "-"})
    if var_names is None:
        if dim is None:
            raise ValueError("give dim or var_names")
        var_names = default_names(dim)
    var_names = list(var_names)
    if dim is not None and len(var_names) != dim:
        raise ValueError(f"{len(var_names)} variable names for dimension {dim}")
    clash = set(var_names) & set(BUILTINS)
    if clash:
        raise ValueError(f"variable names shadow builtins: {sorted(clash)}")
    if len(set(var_names)) != len(var_names):
        raise ValueError("duplicate variable names")
    return _Parser(src, var_names).parse()


# -- printing ----------------------------------------------------------------


def to_source(node: Expr, names: Sequence[str] | None = None) -> str:
    """Canonical fully parenthesised text; ``parse(to_source(a)) == a``."""

    def name(i):
        if names is not None and i < len(names):
            return names[i]
        return f"x{i + 1}" if names is None else f"x{i + 1}"

    def go(n: Expr) -> str:
        match n:
            case Const(value=v):
                text = format_scalar(v)
                return f"({text})" if text.startswith("-") else text
            case Var(index=i):
                return name(i)
            case Neg(arg=a):
                return f"-({go(a)})"
            case Add(left=l, right=r):
                return f"({go(l)})+({go(r)})"
            case Sub(left=l, right=r):
                return f"({go(l)})-({go(r)})"
            case Mul(left=l, right=r):
                return f"({go(l)})*({go(r)})"
            case Div(left=l, right=r):
                return f"({go(l)})/({go(r)})"
            case PowInt(base=b, exponent=k):
                return f"({go(b)})^{k}"
            case Call(name=fn, arg=a):
                return f"{fn}({go(a)})"
        raise TypeError(f"not an expression node: {n!r}")

    return go(node)


# -- evaluation --------------------------------------------------------------


def _has_var(node: Expr) -> bool:
    match node:
        case Var():
            return True
        case Const():
            return False
        case Neg(arg=a) | Call(arg=a) | PowInt(base=a):
            return _has_var(a)
        case Add(left=l, right=r) | Sub(left=l, right=r) | Mul(left=l, right=r) | Div(left=l, right=r):
            return _has_var(l) or _has_var(r)
    raise TypeError(node)


def has_calls(node: Expr) -> bool:
    match node:
        case Call():
            return True
        case Var() | Const():
            return False
        case Neg(arg=a) | PowInt(base=a):
            return has_calls(a)
        case Add(left=l, right=r) | Sub(left=l, right=r) | Mul(left=l, right=r) | Div(left=l, right=r):
            return has_calls(l) or has_calls(r)
    raise TypeError(node)


def _call(name: str, x: float) -> float:
    if name == "log":
        if x <= 0:
            raise EvalDomainError(f"log of nonpositive value {x!r}")
        return math.log(x)
    if name == "sqrt":
        if x < 0:
            raise EvalDomainError(f"sqrt of negative value {x!r}")
        return math.sqrt(x)
    if name == "abs":
        return abs(x)
    try:
        return getattr(math, name)(x)
    except OverflowError:
        raise EvalDomainError(f"{name}({x!r}) overflows") from None


def evaluate_ast(node: Expr, coords: Sequence[Scalar]) -> Scalar:
    """Evaluate with exact arithmetic where the node kinds allow it.

    Division by a variable-dependent divisor, negative powers and builtin
    calls are computed in floats, and the float result propagates upward.
    """
    match node:
        case Const(value=v):
            return v
        case Var(index=i):
            return coords[i]
        case Neg(arg=a):
            return -evaluate_ast(a, coords)
        case Add(left=l, right=r):
            return evaluate_ast(l, coords) + evaluate_ast(r, coords)
        case Sub(left=l, right=r):
            return evaluate_ast(l, coords) - evaluate_ast(r, coords)
        case Mul(left=l, right=r):
            return evaluate_ast(l, coords) * evaluate_ast(r, coords)
        case Div(left=l, right=r):
            num = evaluate_ast(l, coords)
            den = evaluate_ast(r, coords)
            if den == 0:
                raise EvalDomainError("division by zero")
            if _has_var(r):
                return float(num) / float(den)
            return num / den
        case PowInt(base=b, exponent=k):
            x = evaluate_ast(b, coords)
            if k >= 0:
                return x**k
            if x == 0:
                raise EvalDomainError(f"zero raised to {k}")
            return float(x) ** k
        case Call(name=fn, arg=a):
            return _call(fn, float(evaluate_ast(a, coords)))
    raise TypeError(f"not an expression node: {node!r}")


# -- lowering to polynomials -------------------------------------------------


def lower(node: Expr, dim: int) -> Polynomial:
    """Fully expanded exact polynomial (around the origin) for ``node``."""
    match node:
        case Const(value=v):
            if isinstance(v, float):
                raise NotPolynomial(node, "decimal literal forces float mode")
            return Polynomial.constant(v, dim)
        case Var(index=i):
            return Polynomial.variable(i, dim)
        case Neg(arg=a):
            return -lower(a, dim)
        case Add(left=l, right=r):
            return lower(l, dim) + lower(r, dim)
        case Sub(left=l, right=r):
            return lower(l, dim) - lower(r, dim)
        case Mul(left=l, right=r):
            return lower(l, dim) * lower(r, dim)
        case Div(left=l, right=r):
            den = lower(r, dim)
            if den.degree is None:
                raise NotPolynomial(node, "division by zero")
            if den.degree != 0:
                raise NotPolynomial(node, "division by a non-constant")
            return lower(l, dim) * (1 / den.terms[(0,) * dim])
        case PowInt(base=b, exponent=k):
            if k < 0:
                raise NotPolynomial(node, "negative exponent")
            return lower(b, dim) ** k
        case Call(name=fn):
            raise NotPolynomial(node, f"call to {fn}")
    raise TypeError(f"not an expression node: {node!r}")


# -- fields and maps ---------------------------------------------------------


class ScalarField:
    """An evaluable f: Q -> R backed by an AST or an exact Polynomial."""

    def __init__(self, dim: int, *, ast: Expr | None = None, poly: Polynomial | None = None,
                 names: Sequence[str] | None = None, source: str | None = None):
        if (ast is None) == (poly is None):
            raise ValueError("exactly one of ast / poly must be given")
        if poly is not None and poly.dim != dim:
            raise DimensionMismatch(f"{poly.dim}-d polynomial for a {dim}-d field")
        self.dim = dim
        self.ast = ast
        self.poly = poly
        self.names = list(names) if names else default_names(dim)
        self.source = source

    @classmethod
    def parse(cls, src: str, names: Sequence[str] | None = None, dim: int | None = None,
              lower_polynomials: bool = True) -> ScalarField:
        """Parse ``src``; polynomial-expressible sources get Polynomial backing."""
        if names is None:
            names = default_names(dim or 1)
        dim = len(names)
        ast = parse(src, dim, names)
        if lower_polynomials:
            try:
                return cls(dim, poly=lower(ast, dim), names=names, source=src)
            except NotPolynomial:
                pass
        return cls(dim, ast=ast, names=names, source=src)

    @classmethod
    def from_polynomial(cls, p: Polynomial, names=None) -> ScalarField:
        return cls(p.dim, poly=p, names=names)

    @property
    def backing(self) -> str:
        return "poly" if self.poly is not None else "ast"

    @property
    def is_transcendental(self) -> bool:
        return self.ast is not None and has_calls(self.ast)

    def to_polynomial(self) -> Polynomial:
        if self.poly is not None:
            return self.poly
        return lower(self.ast, self.dim)

    def __call__(self, q) -> Scalar:
        q = as_point(q)
        if q.dim != self.dim:
            raise DimensionMismatch(f"point of dimension {q.dim} for a {self.dim}-d field")
        if self.poly is not None:
            return self.poly(q)
        return evaluate_ast(self.ast, q.coords)

    @property
    def name(self) -> str:
        if self.source is not None:
            return self.source
        if self.poly is not None:
            return self.poly.pretty(self.names)
        return to_source(self.ast, self.names)

    def __repr__(self):
        return f"ScalarField({self.name!r}, backing={self.backing})"


def evaluate(f: ScalarField, q) -> Scalar:
    return f(q)


def to_polynomial(f) -> Polynomial:
    if isinstance(f, Polynomial):
        return f
    if isinstance(f, ScalarField):
        return f.to_polynomial()
    raise NotPolynomial(Const(Fraction(0)), f"{type(f).__name__} has no polynomial form")


def polynomial_of(f) -> Polynomial | None:
    """The exact Polynomial behind ``f`` if it has one, else None."""
    if isinstance(f, Polynomial):
        return f
    if isinstance(f, ScalarField) and f.poly is not None:
        return f.poly
    return None


class AffineMap:
    """A mapping g: P -> Q between affine spaces, given by coordinate fields."""

    def __init__(self, components: Sequence):
        components = list(components)
        if not components:
            raise ValueError("a map needs at least one component")
        dims = {c.dim for c in components}
        if len(dims) != 1:
            raise DimensionMismatch(f"components disagree on domain dimension: {sorted(dims)}")
        self.components = components
        self.dim_in = dims.pop()
        self.dim_out = len(components)

    @classmethod
    def parse(cls, sources: Sequence[str], names: Sequence[str]) -> AffineMap:
        return cls([ScalarField.parse(s, names) for s in sources])

    def __call__(self, p) -> Point:
        return Point(c(p) for c in self.components)

    def polynomials(self) -> list[Polynomial] | None:
        polys = [polynomial_of(c) for c in self.components]
        return None if any(p is None for p in polys) else polys

    def __repr__(self):
        return f"AffineMap({[getattr(c, 'name', c) for c in self.components]})"


class CallableField:
    """A field given by an arbitrary Python callable on Points."""

    def __init__(self, dim: int, func, name: str = "f"):
        self.dim = dim
        self.func = func
        self.name = name

    def __call__(self, q) -> Scalar:
        return self.func(as_point(q))

    def __repr__(self):
        return f"CallableField({self.name!r})"


def field_dim(f) -> int | None:
    return getattr(f, "dim", None)
