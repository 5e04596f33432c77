"""Deterministic parallel reduction of localization sums.

Fixed-point terms are split into contiguous chunks, each chunk is summed over
its own common denominator (in a worker process when ``workers > 1``), and the
partial sums are combined pairwise. Rational functions with linear-factor
denominators are stored in reduced form, so the result does not depend on the
chunking or on the shape of the reduction tree.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import ceil
from typing import TYPE_CHECKING

from .exactalg import RationalFunction
from .partitions import chunked, enumerate_tuples

if TYPE_CHECKING:
    from .localization import Context, Integrand


def _chunk_sum(args) -> RationalFunction:
    ctx, integrand, tuples = args
    return RationalFunction.sum_factored(ctx.vars, (integrand.term(ctx, y) for y in tuples))


def _chunk_value(args) -> Fraction:
    ctx, integrand, tuples, point = args
    total = Fraction(0)
    for y in tuples:
        total += integrand.term(ctx, y).evaluate(point)
    return total


def tree_sum(parts: list[RationalFunction], vars) -> RationalFunction:
    if not parts:
        return RationalFunction.zero(vars)
    while len(parts) > 1:
        nxt = [parts[i] + parts[i + 1] for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def chunk_size(total: int, workers: int) -> int:
    if workers <= 1:
        return max(1, min(total, 16))
    return max(1, ceil(total / (2 * workers)))


def reduce_terms(ctx: Context, n: int, integrand: Integrand, workers: int = 1,
                 size: int | None = None) -> RationalFunction:
    tuples = list(enumerate_tuples(ctx.r, n))
    size = size or chunk_size(len(tuples), workers)
    parts = _run(_chunk_sum, [(ctx, integrand, c) for c in chunked(tuples, size)], workers)
    return tree_sum(parts, ctx.vars)


def _run(fn, jobs, workers: int) -> list:
    if workers <= 1 or len(jobs) == 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def reduce_values(ctx: Context, n: int, integrand: Integrand, point, workers: int = 1,
                  size: int | None = None) -> Fraction:
    """The localization sum evaluated at a rational point, chunked like :func:`reduce_terms`."""
    tuples = list(enumerate_tuples(ctx.r, n))
    size = size or chunk_size(len(tuples), workers)
    point = tuple(Fraction(v) for v in point)
    parts = _run(_chunk_value, [(ctx, integrand, c, point) for c in chunked(tuples, size)], workers)
    total = Fraction(0)
    for p in parts:
        total += p
    return total
