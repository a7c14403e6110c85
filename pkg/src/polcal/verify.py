"""Seeded randomized suites for the exact finite-calculus identities.

Every suite draws random rational polynomials (dimension <= 3, degree <= 5)
from ``random.Random(seed)`` and compares both sides of an identity with
exact arithmetic.  Reports are plain dicts with a stable key order, so the
same seed gives byte-identical JSON.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .combinatorics import euler_alternating_sum, euler_closed_form
from .derivative import derive_exact, euler_theorem_check
from .numeric import Direction, Point, format_scalar
from .polarization import (
    ExtendedField,
    compose,
    chain_expand,
    leibniz_expand,
    polarize,
    polarize_extended,
    polarize_unidirectional,
    product,
    reconstruct_increment,
)
from .polynomial import Polynomial

SUITES = ("iterate", "leibniz", "chain", "euler", "reconstruct", "euler-theorem")
DEFAULT_TRIALS = {"iterate": 200, "leibniz": 100, "chain": 50, "euler": 0, "reconstruct": 200,
                  "euler-theorem": 0}


@dataclass(frozen=True)
class CorpusConfig:
    max_dim: int = 3
    max_degree: int = 5
    max_terms: int = 6
    coef_span: int = 9
    coef_den: int = 6
    point_span: int = 3
    point_den: int = 4


def random_rational(rng: random.Random, span: int, den: int) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def random_polynomial(rng: random.Random, dim: int | None = None, degree: int | None = None,
                      cfg: CorpusConfig = CorpusConfig()) -> Polynomial:
    dim = dim or rng.randint(1, cfg.max_dim)
    degree = rng.randint(0, cfg.max_degree) if degree is None else degree
    terms = {}
    for _ in range(rng.randint(1, cfg.max_terms)):
        total = rng.randint(0, degree)
        exp = [0] * dim
        for _ in range(total):
            exp[rng.randrange(dim)] += 1
        terms[tuple(exp)] = random_rational(rng, cfg.coef_span, cfg.coef_den)
    return Polynomial(dim, terms)


def random_point(rng: random.Random, dim: int, cfg: CorpusConfig = CorpusConfig()) -> Point:
    return Point(random_rational(rng, cfg.point_span, cfg.point_den) for _ in range(dim))


def random_vector(rng: random.Random, dim: int, cfg: CorpusConfig = CorpusConfig()) -> Direction:
    return Direction(random_rational(rng, cfg.point_span, cfg.point_den) for _ in range(dim))


def _vecs(vs) -> list:
    return [v.to_json() for v in vs]


class _Suite:
    def __init__(self, name: str, seed: int, trials: int):
        self.name = name
        self.seed = seed
        self.trials = trials
        self.checks = 0
        self.failures: list[dict] = []

    def check(self, lhs, rhs, **context):
        self.checks += 1
        if lhs != rhs:
            record = {"lhs": format_scalar(lhs), "rhs": format_scalar(rhs)}
            record.update(context)
            self.failures.append(record)

    def report(self) -> dict:
        return {"suite": self.name, "seed": self.seed, "trials": self.trials,
                "checks": self.checks, "failures": self.failures}


def suite_iterate(rng, s: _Suite, cfg: CorpusConfig, max_order: int = 5):
    for trial in range(s.trials):
        p = random_polynomial(rng, cfg=cfg)
        q = random_point(rng, p.dim, cfg)
        vs = [random_vector(rng, p.dim, cfg) for _ in range(max_order)]
        for n in range(max_order + 1):
            whole = polarize(p, q, vs[:n]).value
            for n1 in range(n + 1):
                inner = ExtendedField.polarization_of(p, n - n1)
                lhs = polarize_extended(inner, q, vs[:n1], frozen=vs[n1:n])
                s.check(lhs, whole, trial=trial, poly=p.to_json(), point=q.to_json(),
                        dirs=_vecs(vs[:n]), split=[n1, n - n1])


def suite_reconstruct(rng, s: _Suite, cfg: CorpusConfig, max_order: int = 5):
    for trial in range(s.trials):
        p = random_polynomial(rng, cfg=cfg)
        q = random_point(rng, p.dim, cfg)
        n = rng.randint(0, max_order)
        vs = [random_vector(rng, p.dim, cfg) for _ in range(n)]
        end = q
        for v in vs:
            end = end + v
        s.check(reconstruct_increment(p, q, vs), p(end), trial=trial, poly=p.to_json(),
                point=q.to_json(), dirs=_vecs(vs))


def suite_leibniz(rng, s: _Suite, cfg: CorpusConfig, max_order: int = 4):
    for trial in range(s.trials):
        p1 = random_polynomial(rng, cfg=cfg)
        p2 = random_polynomial(rng, dim=p1.dim, cfg=cfg)
        q = random_point(rng, p1.dim, cfg)
        n = rng.randint(0, max_order)
        vs = [random_vector(rng, p1.dim, cfg) for _ in range(n)]
        lhs = polarize(product(p1, p2), q, vs).value
        s.check(lhs, leibniz_expand(p1, p2, q, vs), trial=trial, f=p1.to_json(), f2=p2.to_json(),
                point=q.to_json(), dirs=_vecs(vs))


def suite_chain(rng, s: _Suite, cfg: CorpusConfig, max_order: int = 3):
    inner = CorpusConfig(cfg.max_dim, min(cfg.max_degree, 3), cfg.max_terms, cfg.coef_span,
                         cfg.coef_den, cfg.point_span, cfg.point_den)
    for trial in range(s.trials):
        f = random_polynomial(rng, cfg=cfg)
        d = rng.randint(1, cfg.max_dim)
        g = [random_polynomial(rng, dim=d, cfg=inner) for _ in range(f.dim)]
        p = random_point(rng, d, cfg)
        n = rng.randint(1, max_order)
        us = [random_vector(rng, d, cfg) for _ in range(n)]
        lhs = polarize(compose(f, g), p, us).value
        s.check(lhs, chain_expand(f, g, p, us), trial=trial, f=f.to_json(),
                g=[c.to_json() for c in g], point=p.to_json(), dirs=_vecs(us))


def suite_euler(rng, s: _Suite, cfg: CorpusConfig, bound: int = 10):
    if s.trials == 0:
        triples = itertools.product(range(bound + 1), repeat=3)
    else:
        triples = [(rng.randint(0, bound), rng.randint(0, bound), rng.randint(0, bound)) for _ in range(s.trials)]
    for n, m, l in triples:
        try:
            lhs = euler_alternating_sum(n, m, l)
        except ArithmeticError as exc:
            s.failures.append({"n": n, "m": m, "l": l, "error": str(exc)})
            s.checks += 1
            continue
        s.check(lhs, euler_closed_form(n, m, l), n=n, m=m, l=l)


def _monomials(dim: int, degree: int):
    for idx in itertools.combinations_with_replacement(range(dim), degree):
        exp = [0] * dim
        for i in idx:
            exp[i] += 1
        yield tuple(exp)


def homogeneous_sweep(s: _Suite, polys, extra: int = 2, lambdas=(Fraction(0), Fraction(1), Fraction(-2), Fraction(1, 3))):
    """Closed-form values for homogeneous p of degree n at its base q.

    Checks, for j, k <= n + extra and each v and lambda:
      Delta^j p(q; v) = 0 (j > n), n! p(q+v) (j = n);
      Delta^k p(q+v; lam v) = delta_chi(k, n, lam) p(q+v);
      D^k p(q+v; v) = 0, k! p(q+v), n!/(n-k)! p(q+v);
      D^k (n-k)! = D^(k-m) (n-k+m)! at q+v for m <= k <= n.
    """
    from .combinatorics import delta_chi

    for p, n, vs in polys:
        q = p.base
        for v in vs:
            fv = p(q + v)
            ctx = {"poly": p.to_json(), "v": v.to_json(), "n": n}
            for j in range(n + extra + 1):
                lhs = polarize_unidirectional(p, q, v, j)
                if j > n:
                    s.check(lhs, Fraction(0), check="Delta_above_degree", j=j, **ctx)
                elif j == n:
                    s.check(lhs, factorial(n) * fv, check="Delta_at_degree", j=j, **ctx)
            for k in range(n + extra + 1):
                for lam in lambdas:
                    lhs = polarize_unidirectional(p, q + v, lam * v, k)
                    s.check(lhs, delta_chi(k, n, lam) * fv, check="euler_scaling", k=k,
                            **{"lambda": format_scalar(lam)}, **ctx)
                lhs, rhs = euler_theorem_check(p, k, v)
                s.check(lhs, rhs, check="euler_theorem", k=k, **ctx)
            dk = [derive_exact(p, q + v, [v] * k).value for k in range(n + 1)]
            for k in range(n + 1):
                for m in range(k + 1):
                    s.check(dk[k] * factorial(n - k), dk[k - m] * factorial(n - k + m),
                            check="corollary_ratio", k=k, m=m, **ctx)


def monomial_corpus(max_dim: int = 3, max_degree: int = 4):
    """Every monomial (and a binomial per degree) at a few bases, with test vectors."""
    bases = {1: [(0,), (Fraction(1, 2),)], 2: [(0, 0), (1, -1)], 3: [(0, 0, 0), (Fraction(1, 3), 0, -1)]}
    vectors = {1: [(1,), (-2,), (Fraction(3, 2),)], 2: [(1, 0), (1, 1), (Fraction(-1, 2), 2)],
               3: [(1, 1, 1), (0, -1, Fraction(1, 2)), (2, 0, 1)]}
    for d in range(1, max_dim + 1):
        for n in range(max_degree + 1):
            mons = list(_monomials(d, n))
            for b in bases[d]:
                vs = [Direction(v) for v in vectors[d]]
                for e in mons:
                    yield Polynomial(d, {e: Fraction(1)}, b), n, vs
                if len(mons) > 1:
                    yield Polynomial(d, {mons[0]: Fraction(3), mons[-1]: Fraction(-2, 5)}, b), n, vs


def suite_euler_theorem(rng, s: _Suite, cfg: CorpusConfig, max_degree: int = 4):
    if s.trials == 0:
        homogeneous_sweep(s, monomial_corpus(cfg.max_dim, max_degree))
        return
    polys = []
    for _ in range(s.trials):
        d = rng.randint(1, cfg.max_dim)
        n = rng.randint(0, max_degree)
        base = random_point(rng, d, cfg)
        terms = {e: random_rational(rng, cfg.coef_span, cfg.coef_den)
                 for e in rng.sample(list(_monomials(d, n)), min(3, len(list(_monomials(d, n)))))}
        vs = [random_vector(rng, d, cfg) for _ in range(2)]
        polys.append((Polynomial(d, terms, base), n, vs))
    homogeneous_sweep(s, polys)


_RUNNERS = {
    "iterate": suite_iterate,
    "leibniz": suite_leibniz,
    "chain": suite_chain,
    "euler": suite_euler,
    "reconstruct": suite_reconstruct,
    "euler-theorem": suite_euler_theorem,
}


def run_suite(name: str, trials: int | None = None, seed: int = 0, cfg: CorpusConfig = CorpusConfig()) -> dict:
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if trials is None:
        trials = DEFAULT_TRIALS[name]
    if trials < 0:
        raise ValueError("trials must be >= 0")
    if trials == 0 and name not in ("euler", "euler-theorem"):
        raise ValueError(f"suite {name} has no exhaustive mode; give trials >= 1")
    s = _Suite(name, seed, trials)
    _RUNNERS[name](random.Random(seed), s, cfg)
    return s.report()


__all__ = ["SUITES", "CorpusConfig", "run_suite", "random_polynomial", "random_point", "random_vector",
           "homogeneous_sweep", "monomial_corpus"]
