"""n-th polarizations of fields and mappings, with their finite calculus.

A field is anything callable on a :class:`~polcal.numeric.Point`
(a :class:`~polcal.expr.ScalarField`, a :class:`~polcal.polynomial.Polynomial`,
or a plain function).  A mapping exposes ``components`` (or is a sequence of
fields) and is evaluated componentwise.

All 2**n-term sums run in bitmask order.  Float sums go through
``math.fsum``; exact sums stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

from .combinatorics import (
    IndexSubset,
    OrderTooLarge,
    distinct_subset_covers,
    leibniz_pairs,
    mask_to_subset,
    subset_to_mask,
)
from .numeric import (
    DimensionMismatch,
    Direction,
    EvalDomainError,
    Point,
    Scalar,
    as_direction,
    as_point,
    exact_sum,
    format_scalar,
)

MAX_POLARIZATION_ORDER = 20
MAX_LEIBNIZ_EXPAND_ORDER = 12
MAX_CHAIN_ORDER = 4


@dataclass(frozen=True)
class PolarizationTerm:
    subset: IndexSubset
    sign: int
    point: Point
    value: Scalar

    def to_json(self) -> dict:
        return {
            "subset": list(self.subset),
            "sign": self.sign,
            "point": self.point.to_json(),
            "value": format_scalar(self.value),
        }


@dataclass(frozen=True)
class PolarizationReport:
    value: Scalar
    term_count: int
    terms: tuple[PolarizationTerm, ...] | None = None

    def to_json(self) -> dict:
        out = {"value": format_scalar(self.value), "term_count": self.term_count}
        if self.terms is not None:
            out["terms"] = [t.to_json() for t in self.terms]
        return out


def _prepare(q, dirs, cap: int = MAX_POLARIZATION_ORDER) -> tuple[Point, list[Direction]]:
    q = as_point(q)
    dirs = [as_direction(v) for v in dirs]
    if len(dirs) > cap:
        raise OrderTooLarge(f"order {len(dirs)} exceeds cap {cap}")
    for v in dirs:
        if v.dim != q.dim:
            raise DimensionMismatch(f"direction of dimension {v.dim} at a {q.dim}-d point")
    return q, dirs


def _evaluate(f, point: Point, subset=None) -> Scalar:
    try:
        return f(point)
    except EvalDomainError as exc:
        if exc.subset is None:
            exc.subset = subset
        if exc.point is None:
            exc.point = point
        raise
    except (ZeroDivisionError, OverflowError) as exc:
        raise EvalDomainError(f"{exc} at {point}", subset=subset, point=point) from exc


def increment_points(q: Point, dirs: Sequence[Direction]) -> list[Point]:
    """q + sum_{i in I} v_i for every subset I, indexed by bitmask."""
    n = len(dirs)
    offsets = [tuple(Fraction(0) for _ in range(q.dim))]
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        prev = offsets[mask & (mask - 1)]
        offsets.append(tuple(a + b for a, b in zip(prev, dirs[low].coords)))
    return [Point(a + b for a, b in zip(q.coords, off)) for off in offsets]


def polarize(f, q, dirs, *, terms: bool = False) -> PolarizationReport:
    """(-1)**n * sum over subsets I of (-1)**|I| f(q + sum_{i in I} v_i)."""
    q, dirs = _prepare(q, dirs)
    n = len(dirs)
    points = increment_points(q, dirs)
    values = []
    audit = [] if terms else None
    for mask, pt in enumerate(points):
        subset = mask_to_subset(mask)
        sign = -1 if (n - len(subset)) % 2 else 1
        val = _evaluate(f, pt, subset)
        values.append(sign * val)
        if audit is not None:
            audit.append(PolarizationTerm(subset, sign, pt, val))
    return PolarizationReport(exact_sum(values), 1 << n, tuple(audit) if audit is not None else None)


def delta(f, q, dirs) -> Scalar:
    """Shorthand for ``polarize(f, q, dirs).value``."""
    return polarize(f, q, dirs).value


def polarize_unidirectional(f, q, v, n: int) -> Scalar:
    """n-th polarization along a single repeated direction, n+1 evaluations."""
    q, (v,) = _prepare(q, [v])
    if n < 0:
        raise ValueError("order must be nonnegative")
    if n > MAX_POLARIZATION_ORDER:
        raise OrderTooLarge(f"order {n} exceeds cap {MAX_POLARIZATION_ORDER}")
    values = []
    pt = q
    for m in range(n + 1):
        sign = -1 if (n - m) % 2 else 1
        values.append(sign * comb(n, m) * _evaluate(f, pt))
        pt = pt + v
    return exact_sum(values)


class ExtendedField:
    """F(q; w_1..w_m): a field of a point with m frozen vector slots."""

    def __init__(self, func: Callable[[Point, Sequence[Direction]], Scalar], arity: int, name: str = "F"):
        if arity < 0:
            raise ValueError("arity must be nonnegative")
        self.func = func
        self.arity = arity
        self.name = name

    def __call__(self, q, frozen=()) -> Scalar:
        frozen = [as_direction(w) for w in frozen]
        if len(frozen) != self.arity:
            raise ValueError(f"{self.name} takes {self.arity} vector arguments, got {len(frozen)}")
        return self.func(as_point(q), frozen)

    def at(self, frozen) -> Callable[[Point], Scalar]:
        """The plain field q -> F(q; frozen)."""
        frozen = [as_direction(w) for w in frozen]
        return lambda q: self(q, frozen)

    @classmethod
    def from_field(cls, f) -> ExtendedField:
        return cls(lambda q, _w: f(q), 0, name=getattr(f, "name", "f"))

    @classmethod
    def polarization_of(cls, f, n: int) -> ExtendedField:
        """F(q; w_1..w_n) = delta^n f(q; w_1..w_n)."""
        return cls(lambda q, w: polarize(f, q, w).value, n, name=f"delta^{n}")

    def __repr__(self):
        return f"ExtendedField({self.name}, arity={self.arity})"


def polarize_extended(F: ExtendedField, q, dirs, frozen=()) -> Scalar:
    """Polarize the point slot of F, holding its vector slots fixed."""
    if not isinstance(F, ExtendedField):
        F = ExtendedField.from_field(F)
    frozen = [as_direction(w) for w in frozen]
    if len(frozen) != F.arity:
        raise ValueError(f"{F.name} needs {F.arity} frozen vectors, got {len(frozen)}")
    return polarize(F.at(frozen), q, dirs).value


def _components(g) -> list:
    comps = getattr(g, "components", None)
    if comps is None:
        comps = list(g)
    return list(comps)


def map_at(g, p) -> Point:
    p = as_point(p)
    return Point(_evaluate(c, p) for c in _components(g))


def polarize_map(g, p, dirs) -> Direction:
    """Componentwise polarization; a vector of the codomain's model space."""
    p, dirs = _prepare(p, dirs)
    return Direction(polarize(c, p, dirs).value for c in _components(g))


def subset_polarizations(f, q, dirs) -> dict[int, Scalar]:
    """delta^{|I|} f(q; v^I) for every subset I, keyed by bitmask."""
    q, dirs = _prepare(q, dirs)
    out = {}
    for mask in range(1 << len(dirs)):
        sub = [dirs[i - 1] for i in mask_to_subset(mask)]
        out[mask] = polarize(f, q, sub).value
    return out


def reconstruct_increment(f, q, dirs) -> Scalar:
    """f(q + v_1 + ... + v_n) rebuilt as the sum of all subset polarizations."""
    q, dirs = _prepare(q, dirs)
    parts = subset_polarizations(f, q, dirs)
    return exact_sum([parts[m] for m in range(1 << len(dirs))])


def leibniz_expand(f, f2, q, dirs) -> Scalar:
    """Sum over I | J = N of delta^|I| f(q; v^I) * delta^|J| f2(q; v^J)."""
    q, dirs = _prepare(q, dirs, MAX_LEIBNIZ_EXPAND_ORDER)
    n = len(dirs)
    pf = subset_polarizations(f, q, dirs)
    pg = subset_polarizations(f2, q, dirs)
    values = [pf[subset_to_mask(a)] * pg[subset_to_mask(b)] for a, b in leibniz_pairs(n)]
    return exact_sum(values)


def chain_expand(f, g, p, dirs) -> Scalar:
    """Finite chain rule: sum over distinct-subset covers {I^1..I^k} of N of
    delta^k f(g(p); delta^|I^1| g(p; u^I^1), ..., delta^|I^k| g(p; u^I^k)).
    """
    p, dirs = _prepare(p, dirs, MAX_CHAIN_ORDER)
    n = len(dirs)
    base = map_at(g, p)
    if n == 0:
        return _evaluate(f, base)
    g_pol = {}
    for mask in range(1, 1 << n):
        sub = [dirs[i - 1] for i in mask_to_subset(mask)]
        g_pol[mask] = polarize_map(g, p, sub)
    values = []
    for cover in distinct_subset_covers(n):
        vectors = [g_pol[subset_to_mask(block)] for block in cover]
        values.append(polarize(f, base, vectors).value)
    return exact_sum(values)


def compose(f, g) -> Callable[[Point], Scalar]:
    """The pointwise composition f o g as a plain field."""
    return lambda p: f(map_at(g, p))


def product(f, f2) -> Callable[[Point], Scalar]:
    return lambda q: f(q) * f2(q)
