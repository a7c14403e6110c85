"""Scalars, points, directions and the tolerance policy.

Exact scalars are :class:`fractions.Fraction`, float scalars are plain
``float``.  Python's own numeric tower already implements the contagion rule
we want (``Fraction op float -> float``), so the helpers here only add
normalisation, the two named error cases and the text format used on the
command line and in JSON.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Sequence, Union

Scalar = Union[Fraction, float]


class DimensionMismatch(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


class EvalDomainError(ArithmeticError):
    """A field was evaluated outside its domain (log, sqrt, division)."""

    def __init__(self, message: str, subset=None, point=None):
        super().__init__(message)
        self.subset = subset
        self.point = point


class ZeroToNegativePower(ZeroDivisionError):
    pass


def scalar(x) -> Scalar:
    """Coerce ``x`` to a Scalar: integers and rationals become Fractions."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot interpret {x!r} as a scalar")


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def add(a: Scalar, b: Scalar) -> Scalar:
    return scalar(a) + scalar(b)


def sub(a: Scalar, b: Scalar) -> Scalar:
    return scalar(a) - scalar(b)


def mul(a: Scalar, b: Scalar) -> Scalar:
    return scalar(a) * scalar(b)


def div(a: Scalar, b: Scalar) -> Scalar:
    b = scalar(b)
    if b == 0:
        raise DivisionByZero(f"division of {format_scalar(scalar(a))} by zero")
    return scalar(a) / b


def power(a: Scalar, k: int) -> Scalar:
    if not isinstance(k, int) or isinstance(k, bool):
        raise TypeError("exponent must be an integer")
    a = scalar(a)
    if k < 0 and a == 0:
        raise ZeroToNegativePower(f"0 raised to {k}")
    if isinstance(a, float):
        return math.pow(a, k)
    return a**k


_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_scalar(text: str) -> Scalar:
    """Parse ``"p"``, ``"p/q"`` (exact) or a decimal literal (float)."""
    m = _RATIONAL.match(text)
    if m:
        num, den = m.groups()
        if den is not None and int(den) == 0:
            raise DivisionByZero(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den) if den else 1)
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"not a scalar literal: {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"non-finite scalar literal: {text!r}")
    return value


def format_scalar(x: Scalar) -> str:
    """Exact -> ``"p/q"`` or ``"p"``; float -> shortest round-trip decimal."""
    if isinstance(x, float):
        return repr(x)
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_float(x: Scalar) -> float:
    return float(x)


class _Coords:
    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(scalar(c) for c in coords))
        if not self.coords:
            raise ValueError(f"{type(self).__name__} needs at least one coordinate")

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[Scalar]:
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        return type(self) is type(other) and self.coords == other.coords

    def __hash__(self):
        return hash((type(self).__name__, self.coords))

    def __repr__(self):
        inner = ", ".join(format_scalar(c) for c in self.coords)
        return f"{type(self).__name__}({inner})"

    def to_json(self) -> list[str]:
        return [format_scalar(c) for c in self.coords]

    def as_float(self):
        return type(self)(float(c) for c in self.coords)


def _check_dim(a: _Coords, b: _Coords) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension {a.dim} vs {b.dim}")


class Direction(_Coords):
    """A vector of the model space V."""

    __slots__ = ()

    @classmethod
    def zero(cls, dim: int) -> Direction:
        return cls([0] * dim)

    @classmethod
    def basis(cls, dim: int, i: int) -> Direction:
        return cls([1 if j == i else 0 for j in range(dim)])

    def __add__(self, other):
        if not isinstance(other, Direction):
            return NotImplemented
        _check_dim(self, other)
        return Direction(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other):
        if not isinstance(other, Direction):
            return NotImplemented
        _check_dim(self, other)
        return Direction(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return Direction(-a for a in self.coords)

    def __mul__(self, lam):
        if isinstance(lam, _Coords):
            return NotImplemented
        lam = scalar(lam)
        return Direction(lam * a for a in self.coords)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def max_norm(self) -> Scalar:
        return max(abs(c) for c in self.coords)


class Point(_Coords):
    """A position in the affine space Q.  ``Point + Point`` is a TypeError."""

    __slots__ = ()

    @classmethod
    def origin(cls, dim: int) -> Point:
        return cls([0] * dim)

    def __add__(self, other):
        if not isinstance(other, Direction):
            return NotImplemented
        return translate(self, other)

    def __radd__(self, other):
        return NotImplemented

    def __sub__(self, other):
        # point - point is the displacement vector; point - vector a point
        if isinstance(other, Point):
            _check_dim(self, other)
            return Direction(a - b for a, b in zip(self.coords, other.coords))
        if isinstance(other, Direction):
            return translate(self, -other)
        return NotImplemented


def translate(q: Point, v: Direction) -> Point:
    if not isinstance(q, Point) or not isinstance(v, Direction):
        raise TypeError("translate expects (Point, Direction)")
    _check_dim(q, v)
    return Point(a + b for a, b in zip(q.coords, v.coords))


def as_point(x) -> Point:
    if isinstance(x, Point):
        return x
    if isinstance(x, Direction):
        raise TypeError("a Direction is not a Point")
    if isinstance(x, (int, float, Fraction)):
        return Point([x])
    return Point(x)


def as_direction(x) -> Direction:
    if isinstance(x, Direction):
        return x
    if isinstance(x, Point):
        raise TypeError("a Point is not a Direction")
    if isinstance(x, (int, float, Fraction)):
        return Direction([x])
    return Direction(x)


def as_directions(xs: Iterable) -> list[Direction]:
    return [as_direction(x) for x in xs]


def vector_sum(dirs: Sequence[Direction], dim: int) -> Direction:
    total = Direction.zero(dim)
    for v in dirs:
        total = total + v
    return total


def exact_sum(values: Sequence[Scalar]) -> Scalar:
    """Sum in the given order: exact if every term is exact, else via fsum.

    ``math.fsum`` tracks partials exactly, so float sums of the heavily
    cancelling polarization stencils do not depend on accumulation luck.
    """
    if all(isinstance(v, Fraction) for v in values):
        total = Fraction(0)
        for v in values:
            total += v
        return total
    return math.fsum(float(v) for v in values)


@dataclass(frozen=True)
class TolerancePolicy:
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be nonnegative")

    def close(self, a: Scalar, b: Scalar) -> bool:
        """|a-b| <= abs_tol + rel_tol*max(|a|,|b|); exact pairs must be equal."""
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return a == b
        a, b = float(a), float(b)
        if not (math.isfinite(a) and math.isfinite(b)):
            return False
        return abs(a - b) <= self.abs_tol + self.rel_tol * max(abs(a), abs(b))

    def to_json(self) -> dict:
        return {"abs_tol": self.abs_tol, "rel_tol": self.rel_tol}


DEFAULT_TOLERANCE = TolerancePolicy()
