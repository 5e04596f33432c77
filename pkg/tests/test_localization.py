from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction
from itertools import permutations

import pytest

from nekrasov import localization
from nekrasov.exactalg import LinearForm, PointSampler, RationalFunction
from nekrasov.localization import (HILBERT_CTX, RESIDUE_CTX, UNIT, Context, DegenerateWeightError,
                                   Integrand, ZeroWeightMiscountError, alpha_n, alpha_value, beta_n,
                                   fixed_point_weights, hilbert_closed_form, hilbert_integral,
                                   localization_sum, localization_value, matter_factors, psi_other,
                                   residue_closed_form, residue_sum, residue_via_hilbert,
                                   taut_character, tangent_factors)
from nekrasov.partitions import Partition, enumerate_tuples
from nekrasov.wallcross import u_r

P = Partition
HALF = Fraction(1, 2)


def form(ctx, const=0, **kw):
    return LinearForm({ctx.vars.index(k): Fraction(v) for k, v in kw.items()}, const)


def rf(ctx, name):
    return RationalFunction.variable(ctx.vars, ctx.vars.index(name))


def swap(ctx, i, j):
    return {i: LinearForm.var(j), j: LinearForm.var(i)}


# -- Context ------------------------------------------------------------------

def test_context_variable_table():
    assert Context(2, 4).vars == ("e1", "e2", "a1", "a2", "m1", "m2", "m3", "m4")
    assert HILBERT_CTX.vars == ("e1", "e2", "m1", "m2")
    assert RESIDUE_CTX.vars == ("e1", "e2")


@pytest.mark.parametrize("r,nf", [(0, 0), (1, 3), (2, -1), (2, 5)])
def test_context_rejects_bad_parameters(r, nf):
    with pytest.raises(ValueError):
        Context(r, nf)


# -- weights ------------------------------------------------------------------

def test_taut_character_examples():
    c1, c2 = Context(1, 2), Context(2, 4)
    assert taut_character(c1, (P((1,)),)) == [form(c1, a1=1)]
    assert taut_character(c1, (P((2,)),)) == [form(c1, a1=1), form(c1, a1=1, e2=-1)]
    assert taut_character(c2, (P((1,)), P((1,)))) == [form(c2, a1=1), form(c2, a2=1)]


def test_matter_factor_examples():
    c = Context(1, 2)
    assert matter_factors(c, (P((1,)),), 1) == [form(c, a1=1, e1=-HALF, e2=-HALF, m1=1)]
    assert matter_factors(c, (P(()),), 1) == []
    assert Counter(matter_factors(c, (P((1, 1)),), 2)) == Counter(
        [form(c, a1=1, e1=-HALF, e2=-HALF, m2=1), form(c, a1=1, e1=-3 * HALF, e2=-HALF, m2=1)])


def test_tangent_factor_examples():
    c1 = Context(1, 0)
    assert Counter(tangent_factors(c1, (P((1,)),))) == Counter([form(c1, e1=1), form(c1, e2=1)])
    # the two one-column / one-row diagrams of weight 2
    assert Counter(tangent_factors(c1, (P((2,)),))) == Counter(
        [form(c1, e2=2), form(c1, e2=1), form(c1, e1=1, e2=-1), form(c1, e1=1)])
    assert Counter(tangent_factors(c1, (P((1, 1)),))) == Counter(
        [form(c1, e1=2), form(c1, e1=1), form(c1, e2=1, e1=-1), form(c1, e2=1)])
    c2 = Context(2, 0)
    assert Counter(tangent_factors(c2, (P((1,)), P(())))) == Counter(
        [form(c2, e1=1), form(c2, e2=1), form(c2, a2=1, a1=-1, e1=1, e2=1), form(c2, a1=1, a2=-1)])


def adhm_character(r, vec_y):
    """Tangent character W*V + V*W t1 t2 - (1-t1)(1-t2) V*V, by direct expansion.

    Monomials are (power of t1, power of t2, exponent vector of e_a); the
    framing W = sum_a e_a and V = sum_a e_a sum_{(i,j)} t1^(1-i) t2^(1-j).
    """
    W = [(0, 0, a) for a in range(r)]
    V = [(1 - i, 1 - j, a) for a, y in enumerate(vec_y) for i, j in y.boxes()]
    out: Counter = Counter()

    def add(x, y, shift, sign):
        vec = [0] * r
        vec[y[2]] += 1
        vec[x[2]] -= 1
        out[(y[0] - x[0] + shift[0], y[1] - x[1] + shift[1], tuple(vec))] += sign

    for x in W:
        for y in V:
            add(x, y, (0, 0), 1)
    for x in V:
        for y in W:
            add(x, y, (1, 1), 1)
    for x in V:
        for y in V:
            for shift, sign in (((0, 0), -1), ((1, 0), 1), ((0, 1), 1), ((1, 1), -1)):
                add(x, y, shift, sign)
    assert all(m >= 0 for m in out.values()), "character must be an honest representation"
    return +out


@pytest.mark.parametrize("r,n", [(r, n) for r in (1, 2, 3) for n in range(5)])
def test_tangent_factors_match_adhm_character(r, n):
    ctx = Context(r, 0)
    for vec_y in enumerate_tuples(r, n):
        ours = Counter()
        for f in tangent_factors(ctx, vec_y):
            d = dict(f.coeffs)
            ours[(d.get(0, 0), d.get(1, 0), tuple(d.get(1 + a, 0) for a in range(1, r + 1)))] += 1
        assert ours == adhm_character(r, vec_y), vec_y


@pytest.mark.parametrize("r,n", [(r, n) for r in (1, 2, 3) for n in range(6) if r * n <= 12])
def test_weight_counts(r, n):
    ctx = Context(r, 2 * r)
    for vec_y in enumerate_tuples(r, n):
        w = fixed_point_weights(ctx, vec_y)
        assert w.tangent_count == 2 * r * n
        assert w.matter_count == 2 * r * n
        assert len(w.taut_char) == n
        for f in range(1, 2 * r + 1):
            assert len(matter_factors(ctx, vec_y, f)) == n
        assert all(tangent_factors(ctx, vec_y))


def test_degenerate_weight_is_detected(monkeypatch):
    monkeypatch.setattr(localization, "leg", lambda y, s: 0)
    monkeypatch.setattr(localization, "arm", lambda y, s: -1)
    with pytest.raises(DegenerateWeightError):
        tangent_factors(Context(1, 0), (P((1,)),))


def test_zero_weight_miscount_is_detected():
    # with a present no tautological weight vanishes, so the residue integrand is malformed
    with pytest.raises(ZeroWeightMiscountError):
        Integrand("residue").term(Context(1, 0), (P((1,)),))


def test_wrong_number_of_diagrams():
    with pytest.raises(ValueError):
        taut_character(Context(2, 0), (P((1,)),))


# -- alpha, beta ----------------------------------------------------------------

def alpha1_closed(ctx):
    e1, e2, a, m1, m2 = (rf(ctx, v) for v in ("e1", "e2", "a1", "m1", "m2"))
    ep = e1 + e2
    return (a - ep / 2 + m1) * (a - ep / 2 + m2) / (e1 * e2)


def test_alpha_examples():
    ctx = Context(1, 2)
    assert alpha_n(ctx, 0) == 1
    a1 = alpha1_closed(ctx)
    assert alpha_n(ctx, 1) == a1
    assert alpha_n(ctx, 2) == a1 * (a1 - 1) / 2


def test_beta_examples():
    ctx = Context(1, 2)
    e1, e2, a, m1, m2 = (rf(ctx, v) for v in ("e1", "e2", "a1", "m1", "m2"))
    ep = e1 + e2
    assert beta_n(ctx, 0) == 1
    assert beta_n(ctx, 1) == (a + ep / 2 + m1) * (a + ep / 2 + m2) / (e1 * e2)


@pytest.mark.parametrize("r", [1, 2])
def test_beta_minus_alpha_at_one_instanton(r):
    ctx = Context(r, 2 * r)
    assert beta_n(ctx, 1) - alpha_n(ctx, 1) == u_r(ctx) * (-1) ** (r + 1)


def test_truncated_flavour_alpha_uses_leading_flavours():
    c0, c1 = Context(1, 0), Context(1, 1)
    e1, e2 = rf(c0, "e1"), rf(c0, "e2")
    assert alpha_n(c0, 1) == 1 / (e1 * e2)
    a, m, f1, f2 = rf(c1, "a1"), rf(c1, "m1"), rf(c1, "e1"), rf(c1, "e2")
    assert alpha_n(c1, 1) == (a - (f1 + f2) / 2 + m) / (f1 * f2)


def test_alpha_point_evaluation_matches_symbolic():
    for ctx, n in [(Context(1, 2), 3), (Context(2, 4), 2), (Context(2, 3), 2)]:
        sym = alpha_n(ctx, n)
        sampler = PointSampler(ctx.nvars, seed=n)
        for _ in range(3):
            pt = sampler.draw().values
            assert alpha_value(ctx, n, pt) == sym.evaluate(pt)
            assert localization_value(ctx, n, UNIT, pt) == localization_sum(ctx, n, UNIT).evaluate(pt)


def test_localization_argument_errors():
    ctx = Context(1, 2)
    with pytest.raises(ValueError):
        localization_sum(ctx, -1)
    with pytest.raises(ValueError):
        localization_value(ctx, 1, UNIT, [1, 2, 3])


# -- symmetries ------------------------------------------------------------------

@pytest.mark.parametrize("r,n", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)])
def test_flavour_permutation_symmetry(r, n):
    ctx = Context(r, 2 * r)
    alpha = alpha_n(ctx, n)
    first = ctx.m_index(1)
    for perm in list(permutations(range(2 * r)))[:6]:
        images = {first + i: LinearForm.var(first + p) for i, p in enumerate(perm)}
        assert alpha.substitute(images) == alpha


@pytest.mark.parametrize("r,n", [(1, 2), (1, 3), (1, 4), (2, 2)])
def test_exchange_symmetry(r, n):
    ctx = Context(r, 2 * r)
    alpha = alpha_n(ctx, n)
    assert alpha.substitute(swap(ctx, 0, 1)) == alpha


@pytest.mark.parametrize("r,n", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)])
def test_unit_integrand_is_even_in_epsilon(r, n):
    ctx = Context(r, 0)
    z = psi_other(ctx, n, "unit")
    assert z.substitute(ctx.sign_flip(eps=True)) == z


def test_unit_integrand_single_fixed_point():
    ctx = Context(1, 0)
    assert psi_other(ctx, 1, "unit") == 1 / (rf(ctx, "e1") * rf(ctx, "e2"))


@pytest.mark.parametrize("r,n", [(1, 3), (1, 5), (2, 2), (3, 1)])
def test_degree_zero_homogeneity(r, n):
    ctx = Context(r, 2 * r)
    rng = random.Random(100 * r + n)
    for lam in (2, -3, 7):
        pt = [Fraction(rng.randint(-999, 999) or 1, rng.randint(1, 99)) for _ in range(ctx.nvars)]
        scaled = [lam * v for v in pt]
        assert alpha_value(ctx, n, scaled) == alpha_value(ctx, n, pt)


# -- Hilbert scheme integrals and the residue sum -------------------------------------

def test_hilbert_examples():
    ctx = HILBERT_CTX
    x = rf(ctx, "m1") * rf(ctx, "m2") / (rf(ctx, "e1") * rf(ctx, "e2"))
    assert hilbert_integral(0) == 1
    assert hilbert_integral(1) == x
    assert hilbert_integral(2) == x * (x + 1) / 2


@pytest.mark.parametrize("n", range(6))
def test_hilbert_integral_matches_closed_form(n):
    assert hilbert_integral(n) == hilbert_closed_form(n)


def test_residue_examples():
    ctx = RESIDUE_CTX
    e1, e2 = rf(ctx, "e1"), rf(ctx, "e2")
    assert residue_sum(1) == (e1 + e2) / (e1 * e2)
    assert residue_sum(2) == (e1 + e2) / (2 * e1 * e2)
    assert residue_via_hilbert(3) == (e1 + e2) / (3 * e1 * e2)


@pytest.mark.parametrize("p", range(1, 5))
def test_residue_routes_agree(p):
    assert residue_sum(p) == residue_closed_form(p)
    assert residue_via_hilbert(p) == residue_closed_form(p)


def test_residue_requires_positive_p():
    with pytest.raises(ValueError):
        residue_sum(0)
    with pytest.raises(ValueError):
        residue_via_hilbert(0)
