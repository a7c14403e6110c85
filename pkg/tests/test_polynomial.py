import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polcal.numeric import Direction, Point
from polcal.polynomial import (
    BasePointMismatch,
    NotHomogeneous,
    Polynomial,
    expected_form_entry,
    symmetric_form,
    truncated_product,
)

from conftest import directions, points, polynomials

x = Polynomial.variable(0, 2)
y = Polynomial.variable(1, 2)


def test_add():
    p = Polynomial(1, {(1,): 1}) + Polynomial(1, {(0,): 1})
    assert dict(p.terms) == {(0,): 1, (1,): 1}


def test_mul_square():
    p = Polynomial(1, {(1,): 1, (0,): 1}) ** 2
    assert dict(p.terms) == {(0,): 1, (1,): 2, (2,): 1}


def test_cancellation_to_zero():
    assert (x * y - y * x).is_zero
    assert (x - x).degree is None


def test_base_mismatch():
    with pytest.raises(BasePointMismatch):
        Polynomial.variable(0, 1) + Polynomial.variable(0, 1, base=[1])


def test_homogeneous_parts():
    p = Polynomial(1, {(0,): 1, (1,): 2, (2,): 3})
    assert [dict(h.terms) for h in p.homogeneous_parts()] == [{(0,): 1}, {(1,): 2}, {(2,): 3}]


def test_homogeneous_parts_zero():
    assert Polynomial.zero(2).homogeneous_parts() == []


def test_rebase_cube():
    p = Polynomial(1, {(3,): 1}).rebase(Point([1]))
    assert dict(p.terms) == {(0,): 1, (1,): 3, (2,): 3, (3,): 1}


def test_rebase_constant():
    p = Polynomial.constant(5, 2).rebase(Point([3, -1]))
    assert dict(p.terms) == {(0, 0): 5}


def test_rebase_shifted_square():
    # (x-1)^2 read at 1 is y^2
    p = (Polynomial.variable(0, 1) - 1) ** 2
    assert dict(p.rebase(Point([1])).terms) == {(2,): 1}


@given(polynomials(), st.data())
def test_rebase_preserves_values(p, data):
    b = data.draw(points(p.dim))
    z = data.draw(points(p.dim))
    assert p.rebase(b)(z) == p(z)


@given(polynomials(), st.data())
def test_rebase_round_trip(p, data):
    b = data.draw(points(p.dim))
    assert p.rebase(b).rebase(p.base) == p


@given(polynomials(dim=2), polynomials(dim=2), points(2))
def test_ring_homomorphism(p1, p2, z):
    assert (p1 + p2)(z) == p1(z) + p2(z)
    assert (p1 * p2)(z) == p1(z) * p2(z)


def test_symmetric_form_xy():
    F = symmetric_form(x * y)
    assert F(Direction([1, 0]), Direction([0, 1])) == 1
    assert F(Direction([1, 0]), Direction([1, 0])) == 0


def test_symmetric_form_cube():
    F = symmetric_form(Polynomial(1, {(3,): 1}))
    assert F(Direction([1]), Direction([1]), Direction([1])) == 6


def test_symmetric_form_zero():
    assert symmetric_form(Polynomial.zero(2)).arity == 0


def test_symmetric_form_rejects_inhomogeneous():
    with pytest.raises(NotHomogeneous):
        symmetric_form(x * x + y)


@st.composite
def homogeneous(draw):
    dim = draw(st.integers(1, 3))
    n = draw(st.integers(0, 4))
    exps = [e for e in itertools.product(range(n + 1), repeat=dim) if sum(e) == n]
    chosen = draw(st.lists(st.sampled_from(exps), min_size=1, max_size=4))
    coefs = draw(st.lists(st.fractions(-5, 5, max_denominator=4), min_size=len(chosen), max_size=len(chosen)))
    return Polynomial(dim, dict(zip(chosen, coefs)))


@given(homogeneous(), st.data())
def test_symmetric_form_reproduces_values(p, data):
    if p.is_zero:
        return
    n = p.degree
    F = symmetric_form(p)
    v = data.draw(directions(p.dim))
    value = F(*([v] * n)) if n else F()
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    assert value / fact == p(p.base + v)


@given(homogeneous())
def test_symmetric_form_entries(p):
    if p.is_zero:
        return
    F = symmetric_form(p)
    for idx, value in F.table.items():
        assert value == expected_form_entry(p, idx)


def test_truncated_product():
    a = Polynomial(1, {(0,): 1, (1,): 1})
    assert dict(truncated_product(a, a, 1).terms) == {(0,): 1, (1,): 2}


@given(polynomials(dim=2), polynomials(dim=2), st.integers(0, 5))
def test_truncated_product_is_truncation(p1, p2, n):
    assert truncated_product(p1, p2, n) == (p1 * p2).truncate(n)


@given(polynomials(dim=1), st.data())
def test_compose_matches_pointwise(p, data):
    g = [data.draw(polynomials(dim=2, max_degree=2))]
    z = data.draw(points(2))
    assert p.compose(g)(z) == p(Point([g[0](z)]))


def test_json_round_trip():
    p = Polynomial(2, {(1, 0): Fraction(1, 3), (0, 2): -2}, base=[1, 0])
    assert Polynomial.from_json(p.to_json()) == p
