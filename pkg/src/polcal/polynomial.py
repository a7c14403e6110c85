"""Exact multivariate polynomials carried at an explicit base point.

A :class:`Polynomial` with base point ``b`` stores the map
``x -> sum_a c_a * (x - b)**a``.  Keeping ``b`` explicit makes the
base-point questions (homogeneity *at q*, rebasing) direct.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .combinatorics import multisets
from .numeric import (
    DimensionMismatch,
    Direction,
    Point,
    Scalar,
    as_direction,
    as_point,
    format_scalar,
    parse_scalar,
    scalar,
)

Exponent = tuple[int, ...]


class BasePointMismatch(ValueError):
    pass


class NotHomogeneous(ValueError):
    pass


def _term_key(exp: Exponent):
    # graded: total degree first, then lexicographic with x1 leading
    return (sum(exp), tuple(-e for e in exp))


def _clean(terms: Mapping[Exponent, Scalar]) -> dict[Exponent, Scalar]:
    return {e: c for e, c in sorted(terms.items(), key=lambda kv: _term_key(kv[0])) if c != 0}


@dataclass(frozen=True, eq=False)
class Polynomial:
    dim: int
    terms: Mapping[Exponent, Scalar] = field(default_factory=dict)
    base: Point = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        base = Point.origin(self.dim) if self.base is None else as_point(self.base)
        if base.dim != self.dim:
            raise DimensionMismatch(f"base point of dimension {base.dim} for a {self.dim}-d polynomial")
        clean = {}
        for exp, c in self.terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.dim or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for dimension {self.dim}")
            clean[exp] = clean.get(exp, 0) + scalar(c)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "terms", _clean(clean))

    # -- constructors ------------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, base=None) -> Polynomial:
        return cls(dim, {}, base)

    @classmethod
    def constant(cls, c, dim: int, base=None) -> Polynomial:
        return cls(dim, {(0,) * dim: c}, base)

    @classmethod
    def variable(cls, i: int, dim: int, base=None) -> Polynomial:
        """The coordinate function x_i (0-based), written around ``base``."""
        base = Point.origin(dim) if base is None else as_point(base)
        e = tuple(1 if j == i else 0 for j in range(dim))
        return cls(dim, {e: 1, (0,) * dim: base[i]}, base)

    @classmethod
    def monomial(cls, exp: Sequence[int], coef=1, base=None) -> Polynomial:
        return cls(len(exp), {tuple(exp): coef}, base)

    # -- basic properties ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int | None:
        """Maximal total degree; ``None`` marks the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.terms.values()) and self.base.is_exact

    def is_homogeneous(self, n: int) -> bool:
        """All terms of total degree n around the base point (zero counts)."""
        return all(sum(e) == n for e in self.terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.dim == other.dim and self.base == other.base and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.dim, self.base, tuple(self.terms.items())))

    def same_function(self, other: Polynomial) -> bool:
        """Equality as functions, regardless of base point."""
        return self == other.rebase(self.base)

    # -- evaluation --------------------------------------------------------------

    def __call__(self, q) -> Scalar:
        q = as_point(q)
        if q.dim != self.dim:
            raise DimensionMismatch(f"point of dimension {q.dim} for a {self.dim}-d polynomial")
        if not self.terms:
            return Fraction(0)
        y = [a - b for a, b in zip(q.coords, self.base.coords)]
        top = [0] * self.dim
        for e in self.terms:
            for i, k in enumerate(e):
                if k > top[i]:
                    top[i] = k
        powers = []
        for i in range(self.dim):
            row = [Fraction(1) if isinstance(y[i], Fraction) else 1.0]
            for _ in range(top[i]):
                row.append(row[-1] * y[i])
            powers.append(row)
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    t = t * powers[i][k]
            total = total + t
        return total

    # -- ring structure --------------------------------------------------------

    def _check_compatible(self, other: Polynomial) -> None:
        if self.dim != other.dim:
            raise DimensionMismatch(f"dimension {self.dim} vs {other.dim}")
        if self.base != other.base:
            raise BasePointMismatch(f"base {self.base} vs {other.base}")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(scalar(other), self.dim, self.base)

    def __add__(self, other):
        other = self._coerce(other)
        self._check_compatible(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(self.dim, terms, self.base)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.dim, {e: -c for e, c in self.terms.items()}, self.base)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = scalar(other)
            return Polynomial(self.dim, {e: c * a for e, a in self.terms.items()}, self.base)
        self._check_compatible(other)
        terms: dict[Exponent, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(self.dim, terms, self.base)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        out = Polynomial.constant(1, self.dim, self.base)
        acc = self
        while k:
            if k & 1:
                out = out * acc
            acc = acc * acc
            k >>= 1
        return out

    # -- graded structure ------------------------------------------------------

    def homogeneous_part(self, m: int) -> Polynomial:
        return Polynomial(self.dim, {e: c for e, c in self.terms.items() if sum(e) == m}, self.base)

    def homogeneous_parts(self) -> list[Polynomial]:
        """[part_0, ..., part_deg]; the zero polynomial has no parts."""
        if self.degree is None:
            return []
        return [self.homogeneous_part(m) for m in range(self.degree + 1)]

    def truncate(self, n: int) -> Polynomial:
        return Polynomial(self.dim, {e: c for e, c in self.terms.items() if sum(e) <= n}, self.base)

    def rebase(self, new_base) -> Polynomial:
        """Same function, monomials read around ``new_base``.

        Each (y + c)**a with c = new_base - base is expanded binomially.
        """
        new_base = as_point(new_base)
        if new_base.dim != self.dim:
            raise DimensionMismatch(f"new base of dimension {new_base.dim}")
        if new_base == self.base:
            return self
        shift = [a - b for a, b in zip(new_base.coords, self.base.coords)]
        terms: dict[Exponent, Scalar] = {}
        for e, c in self.terms.items():
            # per-coordinate lists of (exponent, factor)
            factors = [
                [(j, comb(k, j) * shift[i] ** (k - j)) for j in range(k + 1)] for i, k in enumerate(e)
            ]
            for combo in itertools.product(*factors):
                coef = c
                for _, f in combo:
                    coef = coef * f
                if coef != 0:
                    ex = tuple(j for j, _ in combo)
                    terms[ex] = terms.get(ex, 0) + coef
        return Polynomial(self.dim, terms, new_base)

    # -- calculus helpers ------------------------------------------------------

    def partial(self, i: int) -> Polynomial:
        terms: dict[Exponent, Scalar] = {}
        for e, c in self.terms.items():
            if e[i]:
                ex = e[:i] + (e[i] - 1,) + e[i + 1 :]
                terms[ex] = terms.get(ex, 0) + c * e[i]
        return Polynomial(self.dim, terms, self.base)

    def directional(self, v) -> Polynomial:
        """Termwise derivative sum_i v_i * dp/dx_i."""
        v = as_direction(v)
        if v.dim != self.dim:
            raise DimensionMismatch("direction dimension mismatch")
        out = Polynomial.zero(self.dim, self.base)
        for i, vi in enumerate(v.coords):
            if vi != 0:
                out = out + self.partial(i) * vi
        return out

    def compose(self, components: Sequence[Polynomial]) -> Polynomial:
        """x -> self(g_1(x), ..., g_e(x)); result lives at the components' base."""
        if len(components) != self.dim:
            raise DimensionMismatch(f"{len(components)} components for a {self.dim}-d polynomial")
        g0 = components[0]
        comps = [g if g.base == g0.base else g.rebase(g0.base) for g in components]
        for g in comps:
            if g.dim != g0.dim:
                raise DimensionMismatch("components disagree on the domain dimension")
        shifted = [g - b for g, b in zip(comps, self.base.coords)]
        cache: dict[tuple[int, int], Polynomial] = {}

        def pw(i: int, k: int) -> Polynomial:
            if (i, k) not in cache:
                cache[(i, k)] = shifted[i] ** k
            return cache[(i, k)]

        out = Polynomial.zero(g0.dim, g0.base)
        for e, c in self.terms.items():
            t = Polynomial.constant(c, g0.dim, g0.base)
            for i, k in enumerate(e):
                if k:
                    t = t * pw(i, k)
            out = out + t
        return out

    # -- serialisation ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "base": self.base.to_json(),
            "terms": [{"exp": list(e), "coef": format_scalar(c)} for e, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Polynomial:
        terms = {tuple(t["exp"]): parse_scalar(str(t["coef"])) for t in data["terms"]}
        base = Point(parse_scalar(str(b)) for b in data["base"])
        return cls(int(data["dim"]), terms, base)

    def __repr__(self):
        return f"Polynomial({self.pretty()} @ {self.base})"

    def pretty(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = list(names) if names else [f"x{i + 1}" for i in range(self.dim)]
        parts = []
        for e, c in self.terms.items():
            factors = []
            for i, k in enumerate(e):
                if not k:
                    continue
                v = names[i] if self.base[i] == 0 else f"({names[i]}-{format_scalar(self.base[i])})"
                factors.append(v if k == 1 else f"{v}^{k}")
            mono = "*".join(factors)
            if not mono:
                parts.append(format_scalar(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{format_scalar(c)}*{mono}")
        return " + ".join(parts)


def truncated_product(p1: Polynomial, p2: Polynomial, n: int) -> Polynomial:
    """Product in the truncated algebra: drop every term of total degree > n."""
    p1._check_compatible(p2)
    terms: dict[Exponent, Scalar] = {}
    for e1, c1 in p1.terms.items():
        d1 = sum(e1)
        if d1 > n:
            continue
        for e2, c2 in p2.terms.items():
            if d1 + sum(e2) > n:
                continue
            e = tuple(a + b for a, b in zip(e1, e2))
            terms[e] = terms.get(e, 0) + c1 * c2
    return Polynomial(p1.dim, terms, p1.base)


@dataclass(frozen=True)
class SymmetricForm:
    """Symmetric n-linear form on V, stored on sorted index multisets."""

    arity: int
    dim: int
    table: Mapping[tuple[int, ...], Scalar]
    base: Point

    def __call__(self, *dirs) -> Scalar:
        if len(dirs) == 1 and isinstance(dirs[0], (list, tuple)) and self.arity != 1:
            dirs = tuple(dirs[0])
        dirs = [as_direction(v) for v in dirs]
        if len(dirs) != self.arity:
            raise ValueError(f"form of arity {self.arity} given {len(dirs)} vectors")
        for v in dirs:
            if v.dim != self.dim:
                raise DimensionMismatch("direction dimension mismatch")
        total = Fraction(0)
        for idx in itertools.product(range(self.dim), repeat=self.arity):
            coef = self.table[tuple(sorted(idx))]
            if coef == 0:
                continue
            t = coef
            for v, i in zip(dirs, idx):
                t = t * v[i]
            total = total + t
        return total

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "dim": self.dim,
            "base": self.base.to_json(),
            "table": [{"index": list(k), "value": format_scalar(c)} for k, c in self.table.items()],
        }


def symmetric_form(p_hom: Polynomial) -> SymmetricForm:
    """The multilinear form F with F(v, ..., v) / n! = p_hom(q + v).

    Entries are n-th polarizations of p_hom at its base point along
    coordinate basis vectors.
    """
    from .polarization import polarize

    if p_hom.is_zero:
        n = 0
    else:
        n = p_hom.degree
        if not p_hom.is_homogeneous(n):
            raise NotHomogeneous(f"{p_hom.pretty()} is not homogeneous at {p_hom.base}")
    d = p_hom.dim
    basis = [Direction.basis(d, i) for i in range(d)]
    table = {}
    for idx in multisets(d, n):
        table[idx] = polarize(p_hom, p_hom.base, [basis[i] for i in idx]).value
    return SymmetricForm(n, d, table, p_hom.base)


def expected_form_entry(p_hom: Polynomial, idx: Iterable[int]) -> Fraction:
    """Closed-form table entry: alpha! * coefficient of y**alpha."""
    idx = list(idx)
    exp = [0] * p_hom.dim
    for i in idx:
        exp[i] += 1
    c = p_hom.terms.get(tuple(exp), Fraction(0))
    weight = 1
    for k in exp:
        weight *= factorial(k)
    return c * weight
