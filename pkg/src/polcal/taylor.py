"""Taylor polynomials from multidirectional derivatives, and remainder diagnostics.

The coefficient of (x - q)**alpha, |alpha| = m, is d^m f(q; e_alpha) / alpha!,
where e_alpha lists basis vectors with multiplicities alpha.  This is the
multinomial expansion of (1/m!) D^m f(q; v) over sorted index multisets.

Remainder diagnostics tabulate |r(q + t v)| / ||t v||**n with the max-norm
and give a finite-table verdict, never a claim about the actual limit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .combinatorics import multinomial, multisets
from .derivative import DEFAULT_LEVELS, DEFAULT_S0, derive, derive_exact
from .expr import CallableField, polynomial_of
from .numeric import DEFAULT_TOLERANCE, Direction, Point, Scalar, as_direction, as_point, format_scalar
from .polynomial import Polynomial


@dataclass(frozen=True)
class TaylorOptions:
    s0: Fraction = DEFAULT_S0
    levels: int = DEFAULT_LEVELS


@dataclass(frozen=True)
class ProfileOptions:
    t0: Fraction = Fraction(1, 8)
    shrinks: int = 6
    directions: tuple | None = None
    ratio_tol: float = 1e-2
    rays: int = 3
    seed: int = 20240531


@dataclass
class TaylorResult:
    polynomial: Polynomial
    remainder: CallableField
    max_error: float | None = None

    def to_json(self, names=None) -> dict:
        return {"polynomial": self.polynomial.to_json(), "pretty": self.polynomial.pretty(names),
                "max_error": self.max_error}


@dataclass
class RemainderProfile:
    order: int
    rows: list[dict] = field(default_factory=list)
    verdict: str = "fail"
    norm_kind: str = "max"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def ratios(self, direction=None) -> list[float]:
        return [r["ratio"] for r in self.rows if direction is None or r["dir"] == direction]

    def to_json(self) -> dict:
        return {"order": self.order, "norm": self.norm_kind, "rows": self.rows, "verdict": self.verdict}


def _derivative_opts(opts: TaylorOptions | None) -> dict:
    opts = opts or TaylorOptions()
    return {"s0": opts.s0, "levels": opts.levels}


def _basis_multiset(dim: int, idx) -> list[Direction]:
    return [Direction.basis(dim, i) for i in idx]


def _coefficient(f, q: Point, idx, dopts) -> tuple[Scalar, float | None]:
    m = len(idx)
    exp = [0] * q.dim
    for i in idx:
        exp[i] += 1
    est = derive(f, q, _basis_multiset(q.dim, idx), **dopts)
    # (1/m!) * multinomial(m; alpha) = 1/alpha!
    weight = multinomial(m, exp) / factorial(m)
    return est.value * weight, est.error_estimate


def homogeneous_piece(f, q, j: int, opts: TaylorOptions | None = None) -> tuple[Polynomial, float | None]:
    q = as_point(q)
    dopts = _derivative_opts(opts)
    terms = {}
    worst = None
    for idx in multisets(q.dim, j):
        c, err = _coefficient(f, q, idx, dopts)
        exp = [0] * q.dim
        for i in idx:
            exp[i] += 1
        terms[tuple(exp)] = c
        if err is not None:
            worst = err if worst is None else max(worst, err)
    return Polynomial(q.dim, terms, q), worst


def taylor_polynomial(f, q, n: int, opts: TaylorOptions | None = None) -> TaylorResult:
    """Degree-n Taylor polynomial of f at q, based at q."""
    if n < 0:
        raise ValueError("Taylor order must be nonnegative")
    q = as_point(q)
    poly = Polynomial.zero(q.dim, q)
    worst = None
    for m in range(n + 1):
        piece, err = homogeneous_piece(f, q, m, opts)
        poly = poly + piece
        if err is not None:
            worst = err if worst is None else max(worst, err)
    remainder = CallableField(q.dim, lambda x: f(x) - poly(x), name="remainder")
    return TaylorResult(poly, remainder, worst)


def extract_component(f, q, j: int, n: int, opts: TaylorOptions | None = None) -> Polynomial:
    """Degree-j homogeneous piece (1/j!) D^j f(q; x - q) of an order-n expansion."""
    if not 0 <= j <= n:
        raise ValueError(f"component index {j} outside 0..{n}")
    return homogeneous_piece(f, q, j, opts)[0]


def default_directions(dim: int) -> list[Direction]:
    dirs = [Direction.basis(dim, i) for i in range(dim)] + [Direction([1] * dim)]
    out = []
    for v in dirs:
        if v not in out:
            out.append(v)
    return out


def _ratio(value: Scalar, scale: Scalar, n: int) -> float:
    if n == 0:
        return float(abs(value))
    return float(abs(value) / scale**n)


def _verdict(series: dict, ratio_tol: float) -> str:
    for ratios in series.values():
        if not ratios[-1] < ratio_tol:
            return "fail"
        tail = ratios[-3:]
        if any(b > a for a, b in zip(tail, tail[1:])):
            return "fail"
    return "pass"


def remainder_profile(r, q, n: int, opts: ProfileOptions | None = None, *,
                      tol=DEFAULT_TOLERANCE) -> RemainderProfile:
    """|r(q + t v)| / ||t v||**n at t_j = t0 / 2**j, j = 0..shrinks."""
    opts = opts or ProfileOptions()
    if opts.shrinks < 4:
        raise ValueError("shrinks must be >= 4")
    q = as_point(q)
    if not tol.close(r(q), 0):
        raise ValueError(f"remainder does not vanish at q: r(q) = {format_scalar(r(q))}")
    dirs = [as_direction(v) for v in opts.directions] if opts.directions else default_directions(q.dim)
    t0 = Fraction(opts.t0)
    rows, series = [], {}
    for j in range(opts.shrinks + 1):
        t = t0 / 2**j
        for v in dirs:
            ratio = _ratio(r(q + t * v), t * v.max_norm(), n)
            rows.append({"t": format_scalar(t), "dir": v.to_json(), "ratio": ratio})
            series.setdefault(v, []).append(ratio)
    return RemainderProfile(n, rows, _verdict(series, opts.ratio_tol))


def _ray(rng: random.Random, dim: int, unit: bool) -> Direction:
    coords = [Fraction(rng.randint(-4, 4), 4) for _ in range(dim)]
    if unit:
        coords[rng.randrange(dim)] = Fraction(rng.choice((-1, 1)))
    return Direction(coords)


def modified_taylor_probe(f, q0, n: int, opts: ProfileOptions | None = None,
                          topts: TaylorOptions | None = None) -> RemainderProfile:
    """r(q, q') = f(q') - sum_k D^k f(q; q' - q)/k! for (q, q') -> (q0, q0).

    Pairs are q = q0 + t a and q' = q + t u along seeded rays with
    ||a|| <= 1 and ||u|| = 1, so ||q' - q|| = t.
    """
    opts = opts or ProfileOptions()
    if opts.shrinks < 4:
        raise ValueError("shrinks must be >= 4")
    q0 = as_point(q0)
    rng = random.Random(opts.seed)
    rays = [(_ray(rng, q0.dim, False), _ray(rng, q0.dim, True)) for _ in range(opts.rays)]
    dopts = _derivative_opts(topts)
    p = polynomial_of(f)
    t0 = Fraction(opts.t0)
    rows, series = [], {}
    for j in range(opts.shrinks + 1):
        t = t0 / 2**j
        for k, (a, u) in enumerate(rays):
            q = q0 + t * a
            w = t * u
            if p is not None:
                approx = sum((derive_exact(p, q, [w] * m).value / factorial(m) for m in range(n + 1)), Fraction(0))
            else:
                approx = sum(derive(f, q, [w] * m, **dopts).value / factorial(m) for m in range(n + 1))
            ratio = _ratio(f(q + w) - approx, t, n)
            rows.append({"t": format_scalar(t), "dir": u.to_json(), "offset": a.to_json(), "ratio": ratio})
            series.setdefault(k, []).append(ratio)
    return RemainderProfile(n, rows, _verdict(series, opts.ratio_tol))


__all__ = [
    "TaylorOptions",
    "ProfileOptions",
    "TaylorResult",
    "RemainderProfile",
    "taylor_polynomial",
    "extract_component",
    "homogeneous_piece",
    "remainder_profile",
    "modified_taylor_probe",
    "default_directions",
]
