import itertools
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polcal.expr import ScalarField
from polcal.homogeneity import (
    EXACT_PROOF,
    FAIL,
    INDETERMINATE,
    SAMPLED_PASS,
    NotPolyhomogeneous,
    euler_scaling_check,
    extract_homogeneous_components,
    is_homogeneous,
    is_homogeneous_polynomial,
    multilinearity_check,
)
from polcal.numeric import Point
from polcal.polarization import ExtendedField, polarize
from polcal.polynomial import NotHomogeneous, Polynomial

from conftest import points, polynomials

XY = ["x", "y"]
O2 = Point([0, 0])
WITNESS = "x^3/(x^2+y^2)"


def f(src, names=XY):
    return ScalarField.parse(src, names)


def test_monomial_exact_proof():
    v = is_homogeneous(f("x^2*y"), O2, 3)
    assert v.kind == EXACT_PROOF and v.degree == 3


def test_rational_witness_sampled_pass():
    v = is_homogeneous(f(WITNESS), O2, 1)
    assert v.kind == SAMPLED_PASS
    assert v.samples == 32 and v.tolerance is not None and v.seed is not None


def test_inhomogeneous_fails_with_witness():
    v = is_homogeneous(f("x^2 + x", ["x"]), Point([0]), 2)
    assert v.kind == FAIL
    assert v.witnesses[0] == {"lambda": "2", "v": ["1"], "lhs": "6", "rhs": "8"}


def test_constant_of_positive_degree_fails_at_lambda_zero():
    v = is_homogeneous(f("5", ["x"]), Point([0]), 1)
    assert v.kind == FAIL


def test_abs_is_caught_by_negative_lambda():
    v = is_homogeneous(f("abs(x)", ["x"]), Point([0]), 1)
    assert v.kind == FAIL
    assert any(w["lambda"].startswith("-") for w in v.witnesses)


def test_zero_is_indeterminate():
    assert is_homogeneous(f("0"), O2, 3).degree == INDETERMINATE


def test_shifted_base_point():
    assert is_homogeneous(f("(x-1)^2*(y+2)"), Point([1, -2]), 3).kind == EXACT_PROOF
    assert is_homogeneous(f("(x-1)^2*(y+2)"), O2, 3).kind == FAIL


def test_sampled_verdicts_replay():
    a = is_homogeneous(f("sqrt(x^2+y^2)"), O2, 1, seed=11).to_json()
    b = is_homogeneous(f("sqrt(x^2+y^2)"), O2, 1, seed=11).to_json()
    assert a == b and a["kind"] == FAIL


def test_homogeneous_polynomial_pass():
    assert is_homogeneous_polynomial(f("x*y"), O2, 2).kind == EXACT_PROOF


def test_homogeneous_polynomial_witness_fails_multilinearity():
    v = is_homogeneous_polynomial(f(WITNESS), O2, 1)
    assert v.kind == FAIL
    assert v.parts["homogeneous"].kind == SAMPLED_PASS
    lin = v.parts["multilinear"]
    assert lin.kind == FAIL
    assert {"v": ["1", "0"], "w": ["0", "1"]}.items() <= lin.witnesses[0].items()


def test_constant_degree_zero():
    assert is_homogeneous_polynomial(f("7"), O2, 0).passed


def test_multilinear_linear_form():
    F = ExtendedField(lambda q, w: 3 * w[0][0], 1)
    assert multilinearity_check(F, Point([0]), 1).passed


def test_multilinear_square_fails():
    F = ExtendedField(lambda q, w: w[0][0] ** 2, 1)
    v = multilinearity_check(F, Point([0]), 1)
    assert v.kind == FAIL
    w = v.witnesses[0]
    assert (w["v"], w["w"], w["lhs"], w["rhs"]) == (["1"], ["1"], "4", "2")


def test_multilinear_second_polarization():
    sq = f("x^2", ["x"])
    F = ExtendedField(lambda q, w: polarize(sq, q, w).value, 2)
    assert multilinearity_check(F, Point([0]), 2).passed


def test_extract_components():
    comps = extract_homogeneous_components(f("1 + x + x^2", ["x"]), Point([0]), 2)
    assert [dict(c.terms) for c in comps] == [{(0,): 1}, {(1,): 1}, {(2,): 1}]


def test_extract_constant():
    comps = extract_homogeneous_components(f("4", ["x"]), Point([0]), 0)
    assert [dict(c.terms) for c in comps] == [{(0,): 4}]


def test_extract_degree_overflow():
    with pytest.raises(NotPolyhomogeneous):
        extract_homogeneous_components(f("x^2", ["x"]), Point([0]), 1)


def test_extract_lazy_components():
    g = ScalarField.parse("1 + 2*x + 3*x*y", XY, lower_polynomials=False)
    comps = extract_homogeneous_components(g, O2, 2)
    z = Point([2, 5])
    assert [c(z) for c in comps] == [1, 4, 30]


@given(polynomials(max_degree=5), st.data())
def test_extract_sums_back(p, data):
    q0 = data.draw(points(p.dim))
    comps = extract_homogeneous_components(p, q0, 5)
    total = Polynomial.zero(p.dim, q0)
    for c in comps:
        total = total + c
    assert total == p.rebase(q0)
    parts = p.rebase(q0).homogeneous_parts()
    for m, c in enumerate(comps):
        expected = parts[m] if m < len(parts) else Polynomial.zero(p.dim, q0)
        assert c == expected


def test_euler_scaling_examples():
    sq = f("x^2", ["x"])
    assert euler_scaling_check(sq, Point([0]), 2, 2, [1], 1) == (2, 2)
    assert euler_scaling_check(sq, Point([0]), 2, 3, [1], 1) == (0, 0)
    assert euler_scaling_check(sq, Point([0]), 2, 2, [1], 0) == (0, 0)


def test_euler_scaling_requires_homogeneity():
    with pytest.raises(NotHomogeneous):
        euler_scaling_check(f("x + 1", ["x"]), Point([0]), 1, 1, [1], 2)


@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_product_grading(n1, n2, data):
    def hom(n):
        exps = [e for e in itertools.product(range(n + 1), repeat=2) if sum(e) == n]
        return Polynomial(2, {e: data.draw(st.fractions(-3, 3, max_denominator=3)) for e in exps})

    a, b = hom(n1), hom(n2)
    if a.is_zero or b.is_zero:
        return
    assert is_homogeneous(a * b, O2, n1 + n2).kind == EXACT_PROOF
