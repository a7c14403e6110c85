import itertools
from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polcal.combinatorics import (
    OrderTooLarge,
    PartsSumMismatch,
    delta_chi,
    disjoint_pairs,
    distinct_subset_covers,
    euler_alternating_sum,
    euler_closed_form,
    leibniz_pairs,
    multinomial,
    set_partitions,
    stirling2,
    subsets,
)


def test_subsets_order():
    assert list(subsets(2)) == [(), (1,), (2,), (1, 2)]


def test_subsets_empty():
    assert list(subsets(0)) == [()]


def test_subsets_cap():
    with pytest.raises(OrderTooLarge):
        list(subsets(31))


def _brute_covers(n):
    blocks = [b for r in range(1, n + 1) for b in itertools.combinations(range(1, n + 1), r)]
    out = set()
    for r in range(1, len(blocks) + 1):
        for choice in itertools.combinations(blocks, r):
            if set().union(*choice) == set(range(1, n + 1)):
                out.add(tuple(sorted(choice)))
    return out


def test_covers_n1():
    assert list(distinct_subset_covers(1)) == [((1,),)]


def test_covers_n2():
    assert sorted(distinct_subset_covers(2)) == sorted([
        ((1,), (2,)), ((1, 2),), ((1,), (1, 2)), ((1, 2), (2,)), ((1,), (1, 2), (2,)),
    ])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_covers_match_brute_force(n):
    got = list(distinct_subset_covers(n))
    assert len(got) == len(set(got))
    assert set(got) == _brute_covers(n)


def test_covers_n3_count():
    # covers of a 3-set by distinct nonempty subsets (OEIS A003465)
    assert sum(1 for _ in distinct_subset_covers(3)) == 109


def test_covers_cap():
    with pytest.raises(OrderTooLarge):
        list(distinct_subset_covers(5))


@pytest.mark.parametrize(("n", "bell"), [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15)])
def test_set_partitions_bell(n, bell):
    assert sum(1 for _ in set_partitions(n)) == bell


@pytest.mark.parametrize("n", range(6))
def test_leibniz_pairs(n):
    pairs = list(leibniz_pairs(n))
    assert len(pairs) == 3**n
    full = set(range(1, n + 1))
    assert all(set(a) | set(b) == full for a, b in pairs)
    assert len(set(pairs)) == len(pairs)


def test_leibniz_pairs_n1():
    assert sorted(leibniz_pairs(1)) == sorted([((), (1,)), ((1,), ()), ((1,), (1,))])


def test_disjoint_pairs():
    assert len(list(disjoint_pairs(4))) == 16


def test_multinomial():
    assert multinomial(4, [2, 1, 1]) == 12
    assert multinomial(0, []) == 1
    with pytest.raises(PartsSumMismatch):
        multinomial(3, [1, 1])


@given(st.lists(st.integers(0, 5), max_size=4))
def test_multinomial_factorial_formula(parts):
    n = sum(parts)
    expected = Fraction(factorial(n))
    for k in parts:
        expected /= factorial(k)
    assert multinomial(n, parts) == expected


@pytest.mark.parametrize(("n", "m", "l", "value"), [(3, 1, 2, 0), (3, 3, 5, 6), (0, 0, 0, 1), (2, 2, 7, 2)])
def test_euler_sum_examples(n, m, l, value):
    assert euler_alternating_sum(n, m, l) == value


def test_euler_sum_beyond_degree():
    # second difference of x^3 at 0: 8 - 2 + 0
    assert euler_alternating_sum(2, 3, 0) == 6
    assert euler_closed_form(2, 3, 0) == 6


@given(st.integers(0, 10), st.integers(0, 10), st.integers(0, 10))
def test_euler_sum_agrees_with_stirling_form(n, m, l):
    assert euler_alternating_sum(n, m, l) == euler_closed_form(n, m, l)


def test_stirling_row():
    assert [stirling2(4, k) for k in range(5)] == [0, 1, 7, 6, 1]


def test_delta_chi():
    assert delta_chi(2, 2, 1) == 2
    assert delta_chi(3, 2, 5) == 0
    assert delta_chi(2, 2, Fraction(1, 2)) == Fraction(1, 2)
    assert delta_chi(1, 3, 0) == 0


@given(st.integers(0, 5), st.integers(0, 5), st.fractions(min_value=-3, max_value=3, max_denominator=5))
def test_delta_chi_is_difference_of_power(k, n, lam):
    # k-th forward difference of x^n at 1 with step lam
    direct = sum((-1) ** (k - m) * comb(k, m) * (1 + m * lam) ** n for m in range(k + 1))
    assert delta_chi(k, n, lam) == direct
