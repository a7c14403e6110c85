"""Homogeneity at a point: classification, component extraction, scaling checks.

A field f is homogeneous of degree n at q when f(q + lam v) = lam**n f(q + v)
for every real lam and every v.  Taking lam = 0 forces f(q) = 0 whenever
n >= 1; the classifier checks that case explicitly, and when f is undefined
at q (a removable singularity such as x^3/(x^2+y^2) at the origin) it uses
the forced value 0 there.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .combinatorics import delta_chi
from .expr import CallableField, polynomial_of
from .numeric import (
    DEFAULT_TOLERANCE,
    Direction,
    EvalDomainError,
    Point,
    Scalar,
    TolerancePolicy,
    as_direction,
    as_point,
    format_scalar,
)
from .polarization import ExtendedField, polarize, polarize_unidirectional
from .polynomial import NotHomogeneous, Polynomial

EXACT_PROOF = "ExactProof"
SAMPLED_PASS = "SampledPass"
FAIL = "Fail"
INDETERMINATE = "indeterminate"

LAMBDAS = (Fraction(-1), Fraction(2), Fraction(-1, 2), Fraction(3), Fraction(-2), Fraction(1, 2))
DEFAULT_SEED = 20240531


class NotPolyhomogeneous(ValueError):
    pass


@dataclass
class HomogeneityVerdict:
    kind: str
    degree: int | str
    witnesses: list[dict] = field(default_factory=list)
    seed: int | None = None
    samples: int = 0
    tolerance: TolerancePolicy | None = None
    notes: list[str] = field(default_factory=list)
    parts: dict[str, HomogeneityVerdict] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.kind != FAIL

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "degree": self.degree,
            "seed": self.seed,
            "samples": self.samples,
            "tolerance": self.tolerance.to_json() if self.tolerance else None,
            "witnesses": self.witnesses,
        }
        if self.notes:
            out["notes"] = self.notes
        if self.parts:
            out["parts"] = {k: v.to_json() for k, v in self.parts.items()}
        return out


def _vec_json(v) -> list[str]:
    return [format_scalar(c) for c in v]


def _random_rational(rng: random.Random, span: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def random_direction(rng: random.Random, dim: int, nonzero: bool = True) -> Direction:
    while True:
        v = Direction(_random_rational(rng) for _ in range(dim))
        if not nonzero or not v.is_zero():
            return v


class _ForcedAt:
    # f with its value at one point replaced, used for removable singularities
    def __init__(self, f, q: Point, value: Scalar):
        self.f = f
        self.q = q
        self.value = value
        self.dim = q.dim

    def __call__(self, p):
        p = as_point(p)
        if p == self.q:
            return self.value
        return self.f(p)


def regularize_at(f, q, n: int):
    """Return (field, note): f itself, or f with the forced value f(q) = 0.

    Only applies for n >= 1 and only if f cannot be evaluated at q.
    """
    q = as_point(q)
    try:
        f(q)
        return f, None
    except EvalDomainError:
        if n < 1:
            raise
        note = f"f undefined at {q}; using the value 0 forced by lambda = 0"
        return _ForcedAt(f, q, Fraction(0)), note


def _witness_search(p: Polynomial, q: Point, n: int, rng: random.Random) -> dict | None:
    candidates = [Direction.basis(p.dim, i) for i in range(p.dim)]
    candidates.append(Direction([1] * p.dim))
    candidates += [random_direction(rng, p.dim) for _ in range(8)]
    for v in candidates:
        for lam in (Fraction(2),) + LAMBDAS + (Fraction(0),):
            lhs = p(q + lam * v)
            rhs = lam**n * p(q + v)
            if lhs != rhs:
                return {"lambda": format_scalar(lam), "v": _vec_json(v),
                        "lhs": format_scalar(lhs), "rhs": format_scalar(rhs)}
    return None


def is_homogeneous(f, q, n: int, samples: int = 32, *, seed: int = DEFAULT_SEED,
                   tol: TolerancePolicy = DEFAULT_TOLERANCE) -> HomogeneityVerdict:
    """Decide (polynomials) or sample (other fields) homogeneity of degree n at q."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if n < 0:
        raise ValueError("degree must be nonnegative")
    q = as_point(q)
    rng = random.Random(seed)
    p = polynomial_of(f)
    if p is not None:
        r = p.rebase(q)
        if r.is_zero:
            return HomogeneityVerdict(EXACT_PROOF, INDETERMINATE, seed=seed,
                                      notes=["zero function is homogeneous of every degree"])
        if r.is_homogeneous(n):
            return HomogeneityVerdict(EXACT_PROOF, n, seed=seed)
        w = _witness_search(p, q, n, rng)
        return HomogeneityVerdict(FAIL, n, [w] if w else [], seed=seed,
                                  notes=[f"terms of degree {sorted({sum(e) for e in r.terms})} around q"])

    g, note = regularize_at(f, q, n)
    notes = [note] if note else []
    witnesses = []
    dim = q.dim
    # lam = 0: f(q) = 0**n * f(q + v)
    if n >= 1:
        v0 = random_direction(rng, dim)
        lhs, rhs = g(q), 0 * g(q + v0)
        if not tol.close(lhs, rhs):
            witnesses.append({"lambda": "0", "v": _vec_json(v0),
                              "lhs": format_scalar(lhs), "rhs": format_scalar(rhs)})
    all_zero = True
    for i in range(samples):
        lam = LAMBDAS[i % len(LAMBDAS)]
        v = random_direction(rng, dim)
        base = g(q + v)
        lhs = g(q + lam * v)
        rhs = lam**n * base
        if base != 0 or lhs != 0:
            all_zero = False
        if not tol.close(lhs, rhs):
            witnesses.append({"lambda": format_scalar(lam), "v": _vec_json(v),
                              "lhs": format_scalar(lhs), "rhs": format_scalar(rhs)})
    if witnesses:
        return HomogeneityVerdict(FAIL, n, witnesses, seed, samples, tol, notes)
    degree = INDETERMINATE if all_zero else n
    if all_zero:
        notes.append("all sampled values were zero")
    return HomogeneityVerdict(SAMPLED_PASS, degree, [], seed, samples, tol, notes)


def multilinearity_check(F, q, n: int, samples: int = 16, *, seed: int = DEFAULT_SEED,
                         tol: TolerancePolicy = DEFAULT_TOLERANCE) -> HomogeneityVerdict:
    """Slotwise additivity and rational scaling of F(q; w_1..w_n).

    Basis-vector pairs are tried first, then seeded random exact vectors.
    """
    q = as_point(q)
    if not isinstance(F, ExtendedField):
        F = ExtendedField(F, n)
    if F.arity != n:
        raise ValueError(f"extended field has arity {F.arity}, expected {n}")
    rng = random.Random(seed)
    dim = q.dim
    basis = [Direction.basis(dim, i) for i in range(dim)]
    trials = []
    for i in range(dim):
        for j in range(i, dim):
            trials.append((basis[i], basis[j], Fraction(-2)))
    while len(trials) < samples:
        trials.append((random_direction(rng, dim, False), random_direction(rng, dim, False),
                       _random_rational(rng) or Fraction(3)))
    witnesses = []
    checks = 0
    for slot in range(n):
        for t, (v, w, lam) in enumerate(trials):
            others = [basis[(slot + k + t) % dim] for k in range(n)]

            def at(x):
                args = list(others)
                args[slot] = x
                return F(q, args)

            fv, fw = at(v), at(w)
            lhs, rhs = at(v + w), fv + fw
            checks += 2
            if not tol.close(lhs, rhs):
                witnesses.append({"slot": slot + 1, "check": "additivity", "v": _vec_json(v),
                                  "w": _vec_json(w), "lhs": format_scalar(lhs), "rhs": format_scalar(rhs)})
            lhs, rhs = at(lam * v), lam * fv
            if not tol.close(lhs, rhs):
                witnesses.append({"slot": slot + 1, "check": "scaling", "lambda": format_scalar(lam),
                                  "v": _vec_json(v), "lhs": format_scalar(lhs), "rhs": format_scalar(rhs)})
    kind = FAIL if witnesses else SAMPLED_PASS
    return HomogeneityVerdict(kind, n, witnesses, seed, checks, tol)


def is_homogeneous_polynomial(f, q, n: int, samples: int = 32, *, seed: int = DEFAULT_SEED,
                              tol: TolerancePolicy = DEFAULT_TOLERANCE) -> HomogeneityVerdict:
    """Homogeneous of degree n at q with a multilinear n-th polarization there."""
    q = as_point(q)
    hom = is_homogeneous(f, q, n, samples, seed=seed, tol=tol)
    g, _ = regularize_at(f, q, n) if polynomial_of(f) is None else (f, None)
    # delta^n g(q; .) as a function of its n vector slots
    F = ExtendedField(lambda _x, w: polarize(g, q, w).value, n, name=f"delta^{n}")
    lin = multilinearity_check(F, q, n, samples, seed=seed, tol=tol)
    parts = {"homogeneous": hom, "multilinear": lin}
    degree = hom.degree
    if not hom.passed or not lin.passed:
        witnesses = hom.witnesses + lin.witnesses
        return HomogeneityVerdict(FAIL, degree, witnesses, seed, samples, tol, list(hom.notes), parts)
    kind = EXACT_PROOF if hom.kind == EXACT_PROOF else SAMPLED_PASS
    return HomogeneityVerdict(kind, degree, [], seed, samples, tol, list(hom.notes), parts)


def _unidirectional_poly(p: Polynomial, q0: Point, m: int) -> Polynomial:
    # x -> Delta^m p(q0; x - q0) = sum_k (-1)**(m-k) C(m,k) p(q0 + k (x - q0))
    d = p.dim
    out = Polynomial.zero(d)
    for k in range(m + 1):
        comps = [Polynomial.variable(i, d) * k + (1 - k) * q0[i] for i in range(d)]
        term = p.compose(comps)
        out = out + term * ((-1) ** (m - k) * comb(m, k))
    return out.rebase(q0)


def extract_homogeneous_components(f, q0, n: int) -> list:
    """[y^0, ..., y^n], top-down: y^m = (1/m!) Delta^m (f - sum_{j>m} y^j)(q0; . - q0).

    Polynomial-backed f gives exact Polynomials based at q0; other fields
    give lazily evaluated fields.
    """
    q0 = as_point(q0)
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = polynomial_of(f)
    if p is not None:
        p = p.rebase(q0)
        if p.degree is not None and p.degree > n:
            raise NotPolyhomogeneous(f"degree {p.degree} exceeds {n} at {q0}")
        comps: list[Polynomial] = [None] * (n + 1)
        residual = p
        for m in range(n, -1, -1):
            y = _unidirectional_poly(residual, q0, m) * Fraction(1, factorial(m))
            comps[m] = y
            residual = residual - y
        if not residual.is_zero:
            raise ArithmeticError(f"extraction left a residual {residual.pretty()}")
        return comps

    dim = q0.dim
    comps = [None] * (n + 1)
    for m in range(n, -1, -1):
        higher = [c for c in comps[m + 1:]]

        def residual(x, higher=higher):
            return f(x) - sum((c(x) for c in higher), Fraction(0))

        def y(x, m=m, residual=residual):
            x = as_point(x)
            return polarize_unidirectional(residual, q0, x - q0, m) / factorial(m)

        comps[m] = CallableField(dim, y, name=f"y^{m}")
    return comps


def euler_scaling_check(f, q, n: int, k: int, v, lam, *, verdict: HomogeneityVerdict | None = None,
                        samples: int = 16, seed: int = DEFAULT_SEED) -> tuple[Scalar, Scalar]:
    """(Delta^k f(q+v; lam v), delta_chi(k, n, lam) f(q+v)) for f homogeneous at q."""
    q = as_point(q)
    v = as_direction(v)
    if verdict is None:
        verdict = is_homogeneous(f, q, n, samples, seed=seed)
    if not verdict.passed:
        raise NotHomogeneous(f"field is not homogeneous of degree {n} at {q}")
    lhs = polarize_unidirectional(f, q + v, lam * v, k)
    rhs = delta_chi(k, n, lam) * f(q + v)
    return lhs, rhs


def product_degree_check(p1: Polynomial, p2: Polynomial, q, n1: int, n2: int) -> bool:
    """Products of homogeneous polynomials at q are homogeneous of degree n1 + n2."""
    q = as_point(q)
    a, b = p1.rebase(q), p2.rebase(q)
    return is_homogeneous(a * b, q, n1 + n2).passed


__all__ = [
    "HomogeneityVerdict",
    "NotPolyhomogeneous",
    "is_homogeneous",
    "is_homogeneous_polynomial",
    "multilinearity_check",
    "extract_homogeneous_components",
    "euler_scaling_check",
    "regularize_at",
    "EXACT_PROOF",
    "SAMPLED_PASS",
    "FAIL",
    "INDETERMINATE",
]
