from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nekrasov.exactalg import RationalFunction
from nekrasov.localization import MATTER, UNIT, Context, alpha_n, localization_sum
from nekrasov.parallel import chunk_size, reduce_terms, reduce_values, tree_sum


def test_chunk_size_rule():
    assert chunk_size(100, 1) == 16
    assert chunk_size(5, 1) == 5
    assert chunk_size(100, 4) == 13
    assert chunk_size(3, 8) == 1
    assert chunk_size(0, 1) == 1


def test_tree_sum_of_nothing_is_zero():
    assert tree_sum([], ("e1",)).is_zero()


@pytest.mark.parametrize("r,n", [(1, 4), (2, 2)])
def test_digest_is_independent_of_worker_count(r, n):
    ctx = Context(r, 2 * r)
    digests = {reduce_terms(ctx, n, MATTER, workers=w).digest() for w in (1, 2, 4, 8)}
    assert len(digests) == 1
    assert digests == {alpha_n(ctx, n).digest()}


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 12))
def test_digest_is_independent_of_chunking(size):
    ctx = Context(1, 2)
    assert reduce_terms(ctx, 4, MATTER, size=size).digest() == alpha_n(ctx, 4).digest()


def test_unit_integrand_chunking_bitwise():
    ctx = Context(2, 0)
    ref = localization_sum(ctx, 2, UNIT).to_json()
    for size in (1, 3, 7):
        assert reduce_terms(ctx, 2, UNIT, size=size).to_json() == ref


def test_point_values_are_independent_of_workers_and_chunks():
    ctx = Context(2, 4)
    pt = [Fraction(k * k + 1, k + 3) * (-1) ** k for k in range(ctx.nvars)]
    ref = alpha_n(ctx, 2).evaluate(pt)
    for workers in (1, 4):
        assert reduce_values(ctx, 2, MATTER, pt, workers=workers) == ref
    for size in (1, 2, 5):
        assert reduce_values(ctx, 2, MATTER, pt, size=size) == ref


def test_reduction_order_does_not_matter():
    ctx = Context(1, 2)
    parts = [reduce_terms(ctx, k, MATTER) for k in range(4)]
    fwd = tree_sum(list(parts), ctx.vars)
    rev = tree_sum(list(reversed(parts)), ctx.vars)
    seq = RationalFunction.zero(ctx.vars)
    for p in parts:
        seq = seq + p
    assert fwd.to_json() == rev.to_json() == seq.to_json()
