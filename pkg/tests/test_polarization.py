import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polcal.combinatorics import OrderTooLarge
from polcal.expr import AffineMap, ScalarField
from polcal.numeric import Direction, EvalDomainError, Point
from polcal.polarization import (
    ExtendedField,
    chain_expand,
    compose,
    leibniz_expand,
    polarize,
    polarize_extended,
    polarize_map,
    polarize_unidirectional,
    product,
    reconstruct_increment,
)

from conftest import directions, points, poly_with_point, polynomials


def field(src, names=("x",)):
    return ScalarField.parse(src, list(names))


sq = field("x^2")
O = Point([0])
e = Direction([1])


def test_first_order():
    assert polarize(sq, O, [e]).value == 1


def test_second_order():
    r = polarize(sq, O, [e, e])
    assert r.value == 2 and r.term_count == 4


def test_order_zero_is_value():
    assert polarize(sq, Point([3]), []).value == 9


def test_third_order_term_list():
    f = ScalarField.parse("x*y*z + x^2", ["x", "y", "z"])
    vs = [Direction([1, 0, 0]), Direction([0, 2, 0]), Direction([0, 0, 3])]
    r = polarize(f, Point([1, 1, 1]), vs, terms=True)
    assert r.term_count == 8
    signs = {t.subset: t.sign for t in r.terms}
    assert signs[(1, 2, 3)] == 1 and signs[()] == -1
    assert all(signs[s] == -1 for s in [(1, 2), (1, 3), (2, 3)])
    assert all(signs[s] == 1 for s in [(1,), (2,), (3,)])
    assert sum(t.sign * t.value for t in r.terms) == r.value


def test_zero_direction():
    f = field("x^3 + 1")
    assert polarize(f, Point([2]), [e, Direction([0]), e]).value == 0


def test_order_cap():
    with pytest.raises(OrderTooLarge):
        polarize(sq, O, [e] * 21)


def test_domain_error_reports_subset():
    f = field("1/(x-2)")
    with pytest.raises(EvalDomainError) as exc:
        polarize(f, O, [e, e])
    assert exc.value.subset == (1, 2)


def test_unidirectional_cube():
    f = field("x^3")
    assert polarize_unidirectional(f, O, e, 3) == 6
    assert polarize_unidirectional(f, O, e, 4) == 0
    assert polarize_unidirectional(f, Point([2]), e, 0) == 8


def test_unidirectional_evaluations():
    calls = []

    def f(q):
        calls.append(q)
        return q[0] ** 5

    polarize_unidirectional(f, O, e, 10)
    assert len(calls) == 11


@given(poly_with_point(n_dirs=st.just(1)), st.integers(0, 5))
def test_unidirectional_matches_subset_sum(case, n):
    p, q, (v,) = case
    assert polarize_unidirectional(p, q, v, n) == polarize(p, q, [v] * n).value


def test_extended_arity_zero():
    assert polarize_extended(ExtendedField.from_field(sq), Point([1]), [e, e]) == 2


def test_extended_frozen_slot_is_linear():
    F = ExtendedField(lambda q, w: sq(q) * w[0][0], 1)
    w = Direction([Fraction(5, 2)])
    assert polarize_extended(F, Point([1]), [e], [w]) == Fraction(5, 2) * polarize(sq, Point([1]), [e]).value


def test_extended_iteration_once():
    F = ExtendedField.polarization_of(sq, 1)
    assert polarize_extended(F, O, [e], [e]) == polarize(sq, O, [e, e]).value


def test_map_identity():
    g = AffineMap.parse(["x", "y"], ["x", "y"])
    u = Direction([3, -1])
    assert polarize_map(g, Point([1, 1]), [u]) == u
    assert polarize_map(g, Point([1, 1]), [u, u]) == Direction([0, 0])


def test_map_square():
    g = AffineMap.parse(["x^2"], ["x"])
    assert polarize_map(g, O, [e, e]) == Direction([2])


def test_reconstruct():
    assert reconstruct_increment(sq, O, [e, e]) == 4
    assert reconstruct_increment(sq, Point([3]), []) == 9


def test_leibniz_product_rule():
    f = field("x")
    assert leibniz_expand(f, f, O, [e]) == 1
    assert leibniz_expand(f, field("2"), Point([5]), []) == 10


def test_chain_example():
    f = field("y^2", ["y"])
    g = AffineMap.parse(["x^2"], ["x"])
    assert polarize(compose(f, g), O, [e, e]).value == 14
    assert chain_expand(f, g, O, [e, e]) == 14


def test_chain_order_zero():
    f = field("y^2 + 1", ["y"])
    g = AffineMap.parse(["x + 3"], ["x"])
    assert chain_expand(f, g, O, []) == 10


def test_chain_affine_map():
    f = ScalarField.parse("a^2*b", ["a", "b"])
    g = AffineMap.parse(["2*x - y + 1", "x + 3*y"], ["x", "y"])
    p = Point([1, Fraction(1, 2)])
    us = [Direction([1, 0]), Direction([0, 1]), Direction([1, 1])]
    assert chain_expand(f, g, p, us) == polarize(compose(f, g), p, us).value


# -- invariants -----------------------------------------------------------------


@given(poly_with_point(), st.randoms(use_true_random=False))
def test_symmetry(case, rnd):
    p, q, vs = case
    perm = list(vs)
    rnd.shuffle(perm)
    assert polarize(p, q, perm).value == polarize(p, q, vs).value


@given(poly_with_point(n_dirs=st.integers(1, 4)), st.data())
def test_zero_vector_annihilates(case, data):
    p, q, vs = case
    k = data.draw(st.integers(0, len(vs) - 1))
    vs[k] = Direction.zero(p.dim)
    assert polarize(p, q, vs).value == 0


@given(poly_with_point(n_dirs=st.integers(1, 5)))
def test_recursion(case):
    p, q, vs = case
    *head, last = vs
    assert polarize(p, q, vs).value == polarize(p, q + last, head).value - polarize(p, q, head).value


@given(poly_with_point(n_dirs=st.integers(0, 4)), st.data())
def test_iteration(case, data):
    p, q, vs = case
    n1 = data.draw(st.integers(0, len(vs)))
    F = ExtendedField.polarization_of(p, len(vs) - n1)
    assert polarize_extended(F, q, vs[:n1], vs[n1:]) == polarize(p, q, vs).value


@given(polynomials(max_degree=3), st.data())
def test_vanishes_above_degree(p, data):
    n = (p.degree or 0) + 1
    q = data.draw(points(p.dim))
    vs = data.draw(st.lists(directions(p.dim), min_size=n, max_size=n))
    assert polarize(p, q, vs).value == 0


@given(poly_with_point(n_dirs=st.integers(0, 5)))
def test_reconstruction(case):
    p, q, vs = case
    end = q
    for v in vs:
        end = end + v
    assert reconstruct_increment(p, q, vs) == p(end)


@given(poly_with_point(n_dirs=st.integers(0, 4), max_degree=3), st.data())
def test_leibniz(case, data):
    p, q, vs = case
    p2 = data.draw(polynomials(dim=p.dim, max_degree=3))
    assert leibniz_expand(p, p2, q, vs) == polarize(product(p, p2), q, vs).value


@given(polynomials(max_degree=3), st.data())
def test_chain(f, data):
    d = data.draw(st.integers(1, 2))
    g = [data.draw(polynomials(dim=d, max_degree=2)) for _ in range(f.dim)]
    p = data.draw(points(d))
    n = data.draw(st.integers(1, 3))
    us = data.draw(st.lists(directions(d), min_size=n, max_size=n))
    assert chain_expand(f, g, p, us) == polarize(compose(f, g), p, us).value


def test_float_mode_deterministic():
    f = field("exp(x)")
    vs = [Direction([0.1]), Direction([0.2]), Direction([0.3])]
    assert polarize(f, Point([0.5]), vs).value == polarize(f, Point([0.5]), vs).value
