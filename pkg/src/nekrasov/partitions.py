"""Young diagrams, tuples of them, and composition combinatorics.

A diagram is stored by its column heights ``(l_1 >= l_2 >= ... > 0)``. Boxes
are ``(i, j)`` with ``i`` the column and ``j`` the row, both 1-based, so the
boxes of ``Y`` are ``{(i, j) : 1 <= i <= width, 1 <= j <= l_i}``.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, islice
from math import factorial, prod
from typing import Iterator, Sequence


class InvalidCompositionError(ValueError):
    pass


class Partition(tuple):
    """Weakly decreasing tuple of positive column heights."""

    def __new__(cls, heights: Sequence[int] = ()):
        heights = tuple(int(h) for h in heights)
        while heights and heights[-1] == 0:
            heights = heights[:-1]
        if any(h <= 0 for h in heights):
            raise ValueError(f"column heights must be positive: {heights}")
        if any(a < b for a, b in zip(heights, heights[1:])):
            raise ValueError(f"column heights must be weakly decreasing: {heights}")
        return super().__new__(cls, heights)

    def __repr__(self):
        return f"Partition({self.literal()})"

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def width(self) -> int:
        return len(self)

    def column(self, i: int) -> int:
        """Height of column ``i`` (1-based); zero beyond the width."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def transpose(self) -> Partition:
        return _transpose(self)

    def boxes(self) -> Iterator[tuple[int, int]]:
        for i, h in enumerate(self, 1):
            for j in range(1, h + 1):
                yield i, j

    def literal(self) -> str:
        return ",".join(map(str, self)) if self else "-"

    @classmethod
    def parse(cls, text: str) -> Partition:
        text = text.strip()
        if text in ("-", ""):
            return cls(())
        return cls(int(t) for t in text.split(","))


@lru_cache(maxsize=None)
def _transpose(p: tuple[int, ...]) -> Partition:
    if not p:
        return Partition(())
    return Partition(sum(1 for h in p if h >= j) for j in range(1, p[0] + 1))


def arm(p: Partition, box: tuple[int, int]) -> int:
    """``l_i - j``; the box need not lie in ``p``."""
    i, j = box
    return p.column(i) - j


def leg(p: Partition, box: tuple[int, int]) -> int:
    """``l'_j - i`` where ``l'`` are the column heights of the transpose."""
    i, j = box
    return p.transpose().column(j) - i


def _partitions_desc(n: int, cap: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, cap), 0, -1):
        for rest in _partitions_desc(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return tuple(Partition(p) for p in _partitions_desc(n, n))


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """p(n) from Euler's pentagonal recurrence (independent of the enumerator)."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total, k = 0, 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * partition_count(n - g1)
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


def tuple_count(r: int, n: int) -> int:
    """Number of r-tuples of total weight n: coefficient of q^n in prod(1-q^k)^(-r)."""
    counts = [partition_count(k) for k in range(n + 1)]
    series = [1] + [0] * n
    for _ in range(r):
        series = [sum(series[k] * counts[m - k] for k in range(m + 1)) for m in range(n + 1)]
    return series[n]


PartitionTuple = tuple  # tuple of Partition


def enumerate_tuples(r: int, n: int) -> Iterator[tuple[Partition, ...]]:
    """Every r-tuple of diagrams of total weight ``n``, once, in a fixed order.

    The first component runs through weights ``n, n-1, ..., 0`` and, within a
    weight, through :func:`partitions_of`; later components recurse.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if n < 0:
        raise ValueError("n must be non-negative")
    if r == 1:
        for p in partitions_of(n):
            yield (p,)
        return
    for k in range(n, -1, -1):
        for p in partitions_of(k):
            for rest in enumerate_tuples(r - 1, n - k):
                yield (p,) + rest


def chunked(it, size: int) -> Iterator[list]:
    it = iter(it)
    while chunk := list(islice(it, size)):
        yield chunk


def tuple_literal(t: Sequence[Partition]) -> str:
    return "[" + "|".join(p.literal() for p in t) + "]"


def parse_tuple(text: str) -> tuple[Partition, ...]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"tuple literal must be bracketed: {text!r}")
    return tuple(Partition.parse(part) for part in text[1:-1].split("|"))


def enumerate_compositions(k: int) -> Iterator[tuple[int, ...]]:
    """All 2**(k-1) compositions of ``k``: by number of parts, then reverse lex."""
    if k < 1:
        raise ValueError("k must be positive")

    def parts(total: int, count: int):
        if count == 1:
            yield (total,)
            return
        for first in range(total - count + 1, 0, -1):
            for rest in parts(total - first, count - 1):
                yield (first,) + rest

    for count in range(1, k + 1):
        yield from parts(k, count)


def decomposition_types(n: int, sizes: Sequence[int]) -> Iterator[tuple[frozenset, ...]]:
    """Ordered tuples of disjoint subsets of {1..n} with the given sizes and
    strictly decreasing minima."""
    _validate_composition(n, sizes)

    def rec(free: frozenset, idx: int, prev_min: int):
        if idx == len(sizes):
            yield ()
            return
        for subset in combinations(sorted(free), sizes[idx]):
            if subset[0] >= prev_min:
                continue
            chosen = frozenset(subset)
            for rest in rec(free - chosen, idx + 1, subset[0]):
                yield (chosen,) + rest

    yield from rec(frozenset(range(1, n + 1)), 0, n + 1)


def _validate_composition(n: int, sizes: Sequence[int]) -> None:
    if not sizes or any(p < 1 for p in sizes):
        raise InvalidCompositionError(f"not a composition: {tuple(sizes)}")
    if sum(sizes) > n:
        raise InvalidCompositionError(f"|p| = {sum(sizes)} exceeds n = {n}")


def count_decomposition_types(n: int, sizes: Sequence[int]) -> int:
    """Brute-force count of decomposition types of {1..n} with part sizes ``sizes``."""
    return sum(1 for _ in decomposition_types(n, sizes))


def predicted_decomposition_count(n: int, sizes: Sequence[int]) -> int:
    """Count implied by the product identity, for cross-checking the brute force."""
    _validate_composition(n, sizes)
    partial = 1
    acc = 0
    for p in sizes:
        acc += p
        partial *= acc
    num = factorial(n)
    den = prod(factorial(p - 1) for p in sizes) * factorial(n - sum(sizes)) * partial
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError("identity predicts a non-integral count")
    return q
