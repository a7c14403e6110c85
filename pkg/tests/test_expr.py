from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polcal.expr import (
    Add,
    ArityError,
    Call,
    Const,
    Div,
    ExprSyntaxError,
    Mul,
    Neg,
    NotPolynomial,
    PowInt,
    ScalarField,
    Sub,
    UnknownIdentifier,
    Var,
    AffineMap,
    lower,
    parse,
    to_source,
)
from polcal.numeric import DimensionMismatch, EvalDomainError, Point

from conftest import points

XY = ["x", "y"]


def test_precedence_product_of_power():
    assert parse("x^2*y", 2, XY) == Mul(PowInt(Var(0), 2), Var(1))


def test_rational_literal():
    assert parse("1/2 + x", 1, ["x"]) == Add(Const(Fraction(1, 2)), Var(0))


def test_spaced_slash_is_division():
    assert parse("1 / 2", 1, ["x"]) == Div(Const(Fraction(1)), Const(Fraction(2)))


def test_power_binds_tighter_than_unary_minus():
    assert parse("-x^2", 1, ["x"]) == Neg(PowInt(Var(0), 2))


def test_power_tower_is_right_associative():
    assert parse("x^2^3", 1, ["x"]) == PowInt(Var(0), 8)


def test_unbalanced_paren_offset():
    with pytest.raises(ExprSyntaxError) as exc:
        parse("sin(x", 1, ["x"])
    assert exc.value.offset == 6
    assert ")" in exc.value.expected


def test_symbolic_exponent_is_syntax_error():
    with pytest.raises(ExprSyntaxError):
        parse("x^y", 2, XY)


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier) as exc:
        parse("x + w", 2, XY)
    assert exc.value.offset == 5


@pytest.mark.parametrize("src", ["sin x", "sin(x, y)", "x(2)"])
def test_arity_errors(src):
    with pytest.raises(ArityError):
        parse(src, 2, XY)


def test_zero_denominator_literal():
    with pytest.raises(ExprSyntaxError):
        parse("1/0 + x", 1, ["x"])


def test_eval_exact():
    f = ScalarField.parse("x^2", ["x"], lower_polynomials=False)
    assert f(Point([3])) == Fraction(9)
    assert isinstance(f(Point([3])), Fraction)


def test_eval_transcendental_is_float():
    f = ScalarField.parse("exp(x)", ["x"])
    assert f(Point([0])) == 1.0 and isinstance(f(Point([0])), float)


def test_decimal_literal_forces_float():
    f = ScalarField.parse("0.5*x", ["x"])
    assert f.backing == "ast"
    assert isinstance(f(Point([2])), float)


def test_division_by_constant_stays_exact():
    f = ScalarField.parse("x/3", ["x"], lower_polynomials=False)
    assert f(Point([1])) == Fraction(1, 3)


@pytest.mark.parametrize("src", ["1/x", "log(x)", "sqrt(x - 1)", "x^-1"])
def test_domain_errors(src):
    f = ScalarField.parse(src, ["x"])
    with pytest.raises(EvalDomainError):
        f(Point([0]))


def test_dimension_mismatch():
    f = ScalarField.parse("x*y", XY)
    with pytest.raises(DimensionMismatch):
        f(Point([1]))


def test_lowering_binomial():
    p = lower(parse("(x+1)^2", 1, ["x"]), 1)
    assert dict(p.terms) == {(0,): 1, (1,): 2, (2,): 1}


def test_lowering_cancellation():
    assert lower(parse("x*y - y*x", 2, XY), 2).is_zero


@pytest.mark.parametrize("src", ["sin(x)", "1/x", "x^-2", "0.5*x"])
def test_not_polynomial(src):
    with pytest.raises(NotPolynomial):
        lower(parse(src, 1, ["x"]), 1)


def test_not_polynomial_names_node():
    with pytest.raises(NotPolynomial, match="sin"):
        lower(parse("x + sin(x)", 1, ["x"]), 1)


def test_affine_map():
    g = AffineMap.parse(["x + y", "x*y"], XY)
    assert g(Point([2, 3])) == Point([5, 6])


# -- randomized ----------------------------------------------------------------

_leaf = st.one_of(
    st.integers(0, 2).map(Var),
    st.fractions(min_value=0, max_value=5, max_denominator=4).map(Const),
)


def _nodes(children):
    return st.one_of(
        st.tuples(children, children).map(lambda t: Add(*t)),
        st.tuples(children, children).map(lambda t: Sub(*t)),
        st.tuples(children, children).map(lambda t: Mul(*t)),
        children.map(Neg),
        st.tuples(children, st.integers(0, 3)).map(lambda t: PowInt(*t)),
    )


poly_asts = st.recursive(_leaf, _nodes, max_leaves=8)
asts = st.recursive(
    _leaf,
    lambda c: st.one_of(_nodes(c), st.tuples(c, c).map(lambda t: Div(*t)),
                        st.tuples(st.sampled_from(["sin", "exp", "abs"]), c).map(lambda t: Call(*t))),
    max_leaves=8,
)


@given(asts)
def test_print_parse_round_trip(ast):
    names = ["x", "y", "z"]
    assert parse(to_source(ast, names), 3, names) == ast


@given(poly_asts, points(3))
def test_lowering_preserves_values(ast, q):
    from polcal.expr import evaluate_ast

    assert lower(ast, 3)(q) == evaluate_ast(ast, q.coords)
