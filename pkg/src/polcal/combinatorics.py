"""Index-set enumeration and the closed-form identities built on it.

Index subsets are tuples of 1-based indices in increasing order, so
``(1, 3)`` stands for {1, 3} and ``()`` for the empty set.  Every stream
runs in bitmask order (bit ``i-1`` set <=> ``i`` in the subset), which keeps
float summation order reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, factorial
from typing import Iterator

from .numeric import Scalar, power, scalar

IndexSubset = tuple[int, ...]
SubsetCover = tuple[IndexSubset, ...]

MAX_SUBSET_ORDER = 30
MAX_COVER_ORDER = 4
MAX_LEIBNIZ_ORDER = 20
MAX_EULER_ORDER = 25


class OrderTooLarge(ValueError):
    pass


class PartsSumMismatch(ValueError):
    pass


def _check_order(n: int, cap: int, low: int = 0) -> None:
    if not isinstance(n, int) or n < low:
        raise ValueError(f"order must be an integer >= {low}, got {n!r}")
    if n > cap:
        raise OrderTooLarge(f"order {n} exceeds cap {cap}")


def mask_to_subset(mask: int) -> IndexSubset:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def subset_to_mask(subset: IndexSubset) -> int:
    mask = 0
    for i in subset:
        mask |= 1 << (i - 1)
    return mask


def subsets(n: int) -> Iterator[IndexSubset]:
    """All 2**n subsets of {1..n}, empty set first, in bitmask order."""
    _check_order(n, MAX_SUBSET_ORDER)
    for mask in range(1 << n):
        yield mask_to_subset(mask)


def distinct_subset_covers(n: int) -> Iterator[SubsetCover]:
    """Collections of pairwise distinct nonempty subsets with union {1..n}.

    Collections are unordered; each is yielded once, blocks sorted
    lexicographically.  For n=4 this scans 2**15 candidate collections.
    """
    _check_order(n, MAX_COVER_ORDER, low=1)
    full = (1 << n) - 1
    blocks = list(range(1, 1 << n))  # nonempty subset masks
    for choice in range(1, 1 << len(blocks)):
        union = 0
        chosen = []
        j = 0
        c = choice
        while c:
            if c & 1:
                union |= blocks[j]
                chosen.append(blocks[j])
            c >>= 1
            j += 1
        if union == full:
            yield tuple(sorted(mask_to_subset(b) for b in chosen))


def set_partitions(n: int) -> Iterator[SubsetCover]:
    """Covers whose block sizes add up to n, i.e. set partitions of {1..n}."""
    if n == 0:
        yield ()
        return
    for cover in distinct_subset_covers(n):
        if sum(len(b) for b in cover) == n:
            yield cover


def leibniz_pairs(n: int) -> Iterator[tuple[IndexSubset, IndexSubset]]:
    """Ordered pairs (I, J) with I | J = {1..n}; 3**n of them."""
    _check_order(n, MAX_LEIBNIZ_ORDER)
    full = (1 << n) - 1
    for a in range(1 << n):
        rest = full & ~a
        # J must contain rest; iterate the submasks of a for the overlap
        overlap = a
        while True:
            yield mask_to_subset(a), mask_to_subset(rest | overlap)
            if overlap == 0:
                break
            overlap = (overlap - 1) & a


def disjoint_pairs(n: int) -> Iterator[tuple[IndexSubset, IndexSubset]]:
    """Ordered pairs (I, N - I); 2**n of them."""
    full = (1 << n) - 1
    for a in range(1 << n):
        yield mask_to_subset(a), mask_to_subset(full & ~a)


def multisets(d: int, m: int) -> Iterator[tuple[int, ...]]:
    """Sorted index tuples of length m over range(d) (0-based coordinates)."""
    return combinations_with_replacement(range(d), m)


def multinomial(n: int, parts) -> Fraction:
    parts = list(parts)
    if any(p < 0 for p in parts):
        raise ValueError("parts must be nonnegative")
    if sum(parts) != n:
        raise PartsSumMismatch(f"parts {parts} do not sum to {n}")
    # telescoping binomial product C(n, n1) C(n-n1, n2) ...
    out = 1
    left = n
    for p in parts:
        out *= comb(left, p)
        left -= p
    return Fraction(out)


def euler_alternating_sum(n: int, m: int, l: int) -> Fraction:
    """sum_k (-1)**(n-k) C(n,k) (l+k)**m, termwise.

    Equals 0 for m < n and n! for m == n; a violation is raised as a defect.
    """
    for name, val in (("n", n), ("m", m), ("l", l)):
        if val < 0:
            raise ValueError(f"{name} must be nonnegative")
    if n > MAX_EULER_ORDER or m > MAX_EULER_ORDER:
        raise OrderTooLarge(f"n, m must be <= {MAX_EULER_ORDER}")
    total = 0
    for k in range(n + 1):
        total += (-1) ** (n - k) * comb(n, k) * (l + k) ** m
    if m < n and total != 0:
        raise ArithmeticError(f"Euler sum defect: ({n},{m},{l}) -> {total}, expected 0")
    if m == n and total != factorial(n):
        raise ArithmeticError(f"Euler sum defect: ({n},{m},{l}) -> {total}, expected {n}!")
    return Fraction(total)


def stirling2(m: int, k: int) -> int:
    """Stirling numbers of the second kind by the triangular recurrence."""
    row = [1] + [0] * k
    for i in range(1, m + 1):
        new = [0] * (k + 1)
        for j in range(1, min(i, k) + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[k]


def euler_closed_form(n: int, m: int, l: int) -> Fraction:
    # n-th forward difference of x**m at l: sum_j C(m,j) l**(m-j) n! S(j,n)
    if m < n:
        return Fraction(0)
    if m == n:
        return Fraction(factorial(n))
    total = 0
    for j in range(n, m + 1):
        total += comb(m, j) * l ** (m - j) * factorial(n) * stirling2(j, n)
    return Fraction(total)


def delta_chi(k: int, n: int, lam: Scalar) -> Scalar:
    """k-th unidirectional polarization of x**n at 1 in direction lam.

    Evaluated through the double sum over binomial powers; for k > n the
    result is exactly 0 and for k == n it is lam**k * k!.
    """
    if k < 0 or n < 0:
        raise ValueError("k and n must be nonnegative")
    lam = scalar(lam)
    total = Fraction(0)
    for i in range(n + 1):
        inner = 0
        for m in range(k + 1):
            inner += (-1) ** m * comb(k, m) * m**i
        inner *= (-1) ** k
        if inner:
            total = total + comb(n, i) * power(lam, i) * inner
    if isinstance(lam, Fraction):
        if k > n and total != 0:
            raise ArithmeticError(f"delta_chi defect: k={k} > n={n} gave {total}")
        if k == n and total != lam**k * factorial(k):
            raise ArithmeticError(f"delta_chi defect at k = n = {k}")
    return total


__all__ = [
    "IndexSubset",
    "SubsetCover",
    "OrderTooLarge",
    "PartsSumMismatch",
    "subsets",
    "distinct_subset_covers",
    "set_partitions",
    "leibniz_pairs",
    "disjoint_pairs",
    "multisets",
    "multinomial",
    "euler_alternating_sum",
    "euler_closed_form",
    "stirling2",
    "delta_chi",
    "mask_to_subset",
    "subset_to_mask",
]
