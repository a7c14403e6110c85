"""Multidirectional derivatives as limits of scaled polarizations.

d^n f(q; v_1..v_n) = lim_{s->0} delta^n f(q; s v_1, .., s v_n) / s**n.

For polynomials the limit is read off exactly: rebased at q, the polynomial
splits into homogeneous parts h_j, and delta^n p(q; s v) = sum_j s**j
delta^n h_j(q; v).  Other fields go through a Richardson (Neville) tableau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .combinatorics import OrderTooLarge, disjoint_pairs, mask_to_subset, set_partitions
from .expr import CallableField, polynomial_of
from .numeric import Direction, Point, Scalar, as_direction, as_point, exact_sum, format_scalar
from .polarization import _components, _prepare, map_at, polarize, polarize_unidirectional
from .polynomial import NotHomogeneous, Polynomial

EXACT = "ExactPolynomial"
RICHARDSON = "Richardson"

MAX_NUMERIC_ORDER = 8
DEFAULT_S0 = Fraction(1, 8)
DEFAULT_LEVELS = 5


class NumericalBreakdown(ArithmeticError):
    pass


@dataclass
class DerivativeEstimate:
    value: Scalar
    method: str
    error_estimate: float | None = None
    steps: list = field(default_factory=list)
    tableau: list[list[float]] | None = None

    def to_json(self, tableau: bool = False) -> dict:
        out = {
            "value": format_scalar(self.value),
            "method": self.method,
            "error": self.error_estimate,
            "steps": [format_scalar(s) for s in self.steps],
        }
        if tableau and self.tableau is not None:
            out["tableau"] = self.tableau
        return out


def derive_exact(p: Polynomial, q, dirs) -> DerivativeEstimate:
    """The exact limit, via the s-expansion of delta^n p(q; s v)."""
    q, dirs = _prepare(q, dirs)
    n = len(dirs)
    r = p.rebase(q)
    # coefficient of s**j in delta^n p(q; s v) is delta^n h_j(q; v)
    coeffs = [polarize(h, q, dirs).value for h in r.homogeneous_parts()]
    for j, c in enumerate(coeffs[:n]):
        if c != 0:
            raise ArithmeticError(f"internal defect: s^{j} coefficient {c} below order {n}")
    value = coeffs[n] if n < len(coeffs) else Fraction(0)
    return DerivativeEstimate(value, EXACT)


def derivative_polynomial(p: Polynomial, dirs) -> Polynomial:
    """q -> d^n p(q; dirs) as a Polynomial (based at p's base point).

    Built from sum_I sign * p(x + s v_I) in d+1 variables (x, s), keeping the
    coefficient of s**n.
    """
    dirs = [as_direction(v) for v in dirs]
    n = len(dirs)
    d = p.dim
    xs = [Polynomial.variable(i, d + 1, base=list(p.base) + [0]) for i in range(d)]
    s = Polynomial.variable(d, d + 1, base=list(p.base) + [0])
    total = Polynomial.zero(d + 1, list(p.base) + [0])
    for mask in range(1 << n):
        sub = mask_to_subset(mask)
        shift = [sum((dirs[i - 1][k] for i in sub), Fraction(0)) for k in range(d)]
        comps = [x + s * c for x, c in zip(xs, shift)]
        sign = -1 if (n - len(sub)) % 2 else 1
        total = total + p.compose(comps) * sign
    out: dict[tuple[int, ...], Scalar] = {}
    for e, c in total.terms.items():
        if e[d] < n:
            raise ArithmeticError(f"internal defect: s^{e[d]} term survives at order {n}")
        if e[d] == n:
            out[e[:d]] = out.get(e[:d], 0) + c
    return Polynomial(d, out, p.base)


def _scaled_quotient(f, q: Point, dirs: list[Direction], s: Fraction, unidirectional: bool) -> Scalar:
    n = len(dirs)
    if unidirectional:
        val = polarize_unidirectional(f, q, s * dirs[0], n)
    else:
        val = polarize(f, q, [s * v for v in dirs]).value
    return val / s**n


def derive_numeric(f, q, dirs, s0=DEFAULT_S0, levels: int = DEFAULT_LEVELS) -> DerivativeEstimate:
    """Richardson extrapolation of delta^n f(q; s v)/s**n over s_j = s0 / 2**j.

    Polynomial-backed fields are routed to :func:`derive_exact`.
    """
    q, dirs = _prepare(q, dirs, MAX_NUMERIC_ORDER)
    if levels < 2:
        raise ValueError("levels must be >= 2")
    p = polynomial_of(f)
    if p is not None:
        return derive_exact(p, q, dirs)
    n = len(dirs)
    if n == 0:
        return DerivativeEstimate(f(q), RICHARDSON, 0.0, [])
    s0 = Fraction(s0) if not isinstance(s0, float) else Fraction(s0).limit_denominator(1 << 40)
    if s0 <= 0:
        raise ValueError("s0 must be positive")
    uni = all(v == dirs[0] for v in dirs)
    steps = [s0 / 2**j for j in range(levels)]
    table: list[list[float]] = []
    for j, s in enumerate(steps):
        row = [float(_scaled_quotient(f, q, dirs, s, uni))]
        for k in range(1, j + 1):
            row.append(row[k - 1] + (row[k - 1] - table[j - 1][k - 1]) / (2**k - 1))
        if not all(math.isfinite(x) for x in row):
            raise NumericalBreakdown(f"non-finite tableau entry at level {j}")
        table.append(row)
    value = table[-1][-1]
    err = abs(table[-1][-1] - table[-2][-2])
    return DerivativeEstimate(value, RICHARDSON, err, steps, table)


def derive(f, q, dirs, **opts) -> DerivativeEstimate:
    p = polynomial_of(f)
    if p is not None:
        return derive_exact(p, q, dirs)
    return derive_numeric(f, q, dirs, **opts)


def euler_theorem_check(p_hom: Polynomial, k: int, v, q=None) -> tuple[Scalar, Scalar]:
    """(D^k p(q+v; v), closed form) for p homogeneous of degree n at q."""
    q = p_hom.base if q is None else as_point(q)
    v = as_direction(v)
    if k < 0:
        raise ValueError("k must be nonnegative")
    r = p_hom.rebase(q)
    if r.is_zero:
        n = 0
    else:
        n = r.degree
        if not r.is_homogeneous(n):
            raise NotHomogeneous(f"{p_hom.pretty()} is not homogeneous at {q}")
    lhs = derive_exact(p_hom, q + v, [v] * k).value
    fv = p_hom(q + v)
    if k > n:
        rhs = Fraction(0)
    elif k == n:
        rhs = factorial(k) * fv
    else:
        rhs = Fraction(factorial(n), factorial(n - k)) * fv
    return lhs, rhs


def _product_field(f, f2):
    p1, p2 = polynomial_of(f), polynomial_of(f2)
    if p1 is not None and p2 is not None:
        base = p1.base
        return p1 * p2.rebase(base)
    return CallableField(getattr(f, "dim", None), lambda x: f(x) * f2(x), name="f*f2")


def leibniz_derivative_check(f, f2, q, dirs, **opts) -> tuple[Scalar, Scalar]:
    """(d^n (f f2), sum over ordered disjoint (I, I') of d^|I| f * d^|I'| f2)."""
    q, dirs = _prepare(q, dirs, MAX_NUMERIC_ORDER)
    n = len(dirs)
    lhs = derive(_product_field(f, f2), q, dirs, **opts).value
    cache1, cache2 = {}, {}

    def d(g, cache, sub):
        if sub not in cache:
            cache[sub] = derive(g, q, [dirs[i - 1] for i in sub], **opts).value
        return cache[sub]

    terms = [d(f, cache1, a) * d(f2, cache2, b) for a, b in disjoint_pairs(n)]
    return lhs, exact_sum(terms)


def chain_derivative_check(f, g, p, dirs) -> tuple[Scalar, Scalar]:
    """(d^n (f o g)(p), sum over set partitions of d^k f(g(p); d^|I^i| g(p; u^I^i)))."""
    p, dirs = _prepare(p, dirs, 4)
    n = len(dirs)
    pf = polynomial_of(f)
    pg = [polynomial_of(c) for c in _components(g)]
    if pf is None or any(c is None for c in pg):
        raise TypeError("chain_derivative_check needs polynomial-backed f and g")
    lhs = derive_exact(pf.compose(pg), p, dirs).value
    base = map_at(g, p)
    dg = {}
    for cover in set_partitions(n):
        for block in cover:
            if block not in dg:
                sub = [dirs[i - 1] for i in block]
                dg[block] = Direction(derive_exact(c, p, sub).value for c in pg)
    terms = []
    for cover in set_partitions(n):
        terms.append(derive_exact(pf, base, [dg[b] for b in cover]).value)
    return lhs, exact_sum(terms)


def _nested_numeric(f, q: Point, dirs: list[Direction], opts) -> DerivativeEstimate:
    if len(dirs) == 1:
        return derive_numeric(f, q, dirs, **opts)
    # peel one direction at a time: d/ds_1 of (d/ds_2 ... f)
    rest = dirs[1:]

    def inner_field(x):
        return _nested_numeric(f, as_point(x), rest, opts).value

    return derive_numeric(CallableField(q.dim, inner_field), q, dirs[:1], **opts)


def mixed_partial_bridge(f, q, dirs, **opts) -> tuple[DerivativeEstimate, DerivativeEstimate]:
    """(multidirectional derivative, iterated ordinary partials in s_1..s_n).

    The nested side differentiates s -> f(q + sum s_i v_i) one variable at a
    time: termwise for polynomials, by order-1 Richardson otherwise.
    """
    q, dirs = _prepare(q, dirs, 4)
    multi = derive(f, q, dirs, **opts)
    p = polynomial_of(f)
    if p is not None:
        g = p
        for v in reversed(dirs):
            g = g.directional(v)
        return multi, DerivativeEstimate(g(q), EXACT)
    if not dirs:
        return multi, DerivativeEstimate(f(q), RICHARDSON, 0.0, [])
    return multi, _nested_numeric(f, q, dirs, opts)


def homogeneity_check(p: Polynomial, q, dirs, lam) -> tuple[Scalar, Scalar]:
    """(d^n p(q; lam v), lam**n d^n p(q; v))."""
    lam = Fraction(lam)
    dirs = [as_direction(v) for v in dirs]
    lhs = derive_exact(p, q, [lam * v for v in dirs]).value
    rhs = lam ** len(dirs) * derive_exact(p, q, dirs).value
    return lhs, rhs


__all__ = [
    "DerivativeEstimate",
    "NumericalBreakdown",
    "OrderTooLarge",
    "derive",
    "derive_exact",
    "derive_numeric",
    "derivative_polynomial",
    "euler_theorem_check",
    "leibniz_derivative_check",
    "chain_derivative_check",
    "mixed_partial_bridge",
    "homogeneity_check",
]
