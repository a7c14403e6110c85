from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from polcal.numeric import Direction, Point
from polcal.polynomial import Polynomial

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


rationals = st.fractions(min_value=-4, max_value=4, max_denominator=6)
small_rationals = st.fractions(min_value=-2, max_value=2, max_denominator=4)


def points(dim):
    return st.lists(rationals, min_size=dim, max_size=dim).map(Point)


def directions(dim):
    return st.lists(small_rationals, min_size=dim, max_size=dim).map(Direction)


@st.composite
def polynomials(draw, dim=None, max_degree=4, max_terms=5):
    dim = dim or draw(st.integers(1, 3))
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exp = tuple(draw(st.lists(st.integers(0, max_degree), min_size=dim, max_size=dim)))
        if sum(exp) <= max_degree:
            terms[exp] = draw(rationals)
    return Polynomial(dim, terms)


@st.composite
def poly_with_point(draw, n_dirs=st.integers(0, 4), max_degree=4):
    p = draw(polynomials(max_degree=max_degree))
    q = draw(points(p.dim))
    n = draw(n_dirs)
    vs = draw(st.lists(directions(p.dim), min_size=n, max_size=n))
    return p, q, vs


@pytest.fixture
def F():
    return Fraction
