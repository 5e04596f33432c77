from __future__ import annotations

import json
from fractions import Fraction

import pytest

from nekrasov.exactalg import RationalFunction
from nekrasov.localization import Context, alpha_n, beta_n
from nekrasov.wallcross import (REDUCE_INTERPRETATION, DegreeMismatchError, PointEvaluator,
                                SymbolicEvaluator, goal_sides, run_identity, u_r, verify_co_formula,
                                verify_counting, verify_even, verify_exchange_symmetry,
                                verify_flavor_symmetry, verify_goal, verify_hilbert, verify_main,
                                verify_odd, verify_parity_unit, verify_rank1_closed_forms,
                                verify_reduce, verify_residue, verify_sign_parity, wallcross_rhs)


def rf(ctx, name):
    return RationalFunction.variable(ctx.vars, ctx.vars.index(name))


# -- u_r and the right-hand side -------------------------------------------------------

def test_u_r_examples():
    c1 = Context(1, 2)
    e1, e2, a, m1, m2 = (rf(c1, v) for v in ("e1", "e2", "a1", "m1", "m2"))
    assert u_r(c1) == (e1 + e2) * (2 * a + m1 + m2) / (e1 * e2)
    assert u_r(c1).substitute(c1.sign_flip(a=True, m=True)) == -u_r(c1)
    c2 = Context(2, 4)
    e1, e2 = rf(c2, "e1"), rf(c2, "e2")
    mass = 2 * rf(c2, "a1") + 2 * rf(c2, "a2") + sum(rf(c2, f"m{f}") for f in range(1, 5))
    assert u_r(c2) == (e1 + e2) * mass / (e1 * e2)


def test_u_r_needs_full_flavour_count():
    with pytest.raises(ValueError):
        u_r(Context(1, 1))


def test_wallcross_rhs_examples():
    c1 = Context(1, 2)
    u, a1 = u_r(c1), alpha_n(c1, 1)
    assert wallcross_rhs(c1, 1) == u
    assert beta_n(c1, 1) - a1 == u
    # for odd r every sign (-1)^(k(r+1)) is +1
    assert wallcross_rhs(c1, 2) == u * a1 + u * (u - 1) / 2
    assert beta_n(c1, 2) - alpha_n(c1, 2) == u * a1 + u * (u - 1) / 2
    c2 = Context(2, 4)
    assert wallcross_rhs(c2, 1) == -u_r(c2)
    with pytest.raises(ValueError):
        wallcross_rhs(c1, 0)


def test_rank_one_beta_minus_alpha_by_hand():
    # (a+c+m1)(a+c+m2) - (a-c+m1)(a-c+m2) = 2c(2a+m1+m2) with c = (e1+e2)/2
    c1 = Context(1, 2)
    e1, e2, a, m1, m2 = (rf(c1, v) for v in ("e1", "e2", "a1", "m1", "m2"))
    c = (e1 + e2) / 2
    diff = ((a + c + m1) * (a + c + m2) - (a - c + m1) * (a - c + m2)) / (e1 * e2)
    assert diff == 2 * c * (2 * a + m1 + m2) / (e1 * e2) == u_r(c1)


# -- the main identity and its corollaries -----------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_main_rank_one_symbolic(n):
    assert verify_main(Context(1, 2), n).passed


@pytest.mark.parametrize("n", [1, 2])
def test_main_rank_two_symbolic(n):
    assert verify_main(Context(2, 4), n).passed


@pytest.mark.parametrize("r,n", [(1, 5), (2, 3), (3, 2)])
def test_main_randomized(r, n):
    report = verify_main(Context(r, 2 * r), n, "randomized", points=5, seed=11)
    assert report.passed
    assert report.params["points"] == 5 and len(report.certificate["points"]) == 5


def test_even_examples():
    assert verify_even(Context(1, 2), 0).passed
    assert verify_even(Context(1, 2), 4, "randomized", points=5).passed
    assert verify_even(Context(2, 4), 3, "randomized", points=3).passed
    assert verify_even(Context(1, 2), 3, "symbolic").passed


def test_reduce_examples():
    assert verify_reduce(Context(1, 2), 0).passed
    report = verify_reduce(Context(1, 2), 1)
    assert report.passed and report.certificate["interpretation"] == REDUCE_INTERPRETATION
    assert verify_reduce(Context(1, 1), 2).passed
    assert verify_reduce(Context(2, 3), 2, "randomized", points=4).passed


def test_reduce_rank_one_by_hand():
    c2, c1 = Context(1, 2), Context(1, 1)
    lead = SymbolicEvaluator().leading_mass_coefficient(c2, 1)
    e1, e2, a, m1 = (rf(c2, v) for v in ("e1", "e2", "a1", "m1"))
    assert lead == (a - (e1 + e2) / 2 + m1) / (e1 * e2)
    assert lead == alpha_n(c1, 1).extend_vars(c2.vars)


def test_reduce_requires_a_flavour():
    with pytest.raises(ValueError):
        verify_reduce(Context(1, 0), 1)


class CubicEvaluator(PointEvaluator):
    """Pretends the integral is cubic in the last mass whatever n is."""

    def integral(self, ctx, n, integrand=None, images=None):
        p = self._at(ctx.nvars, images)
        return p[-1] ** 3


def test_degree_mismatch_is_detected():
    ev = CubicEvaluator([Fraction(k + 2) for k in range(5)])
    with pytest.raises(DegreeMismatchError):
        ev.leading_mass_coefficient(Context(1, 2), 1)


def test_odd_examples():
    assert verify_odd(Context(1, 0), 4).passed
    report = verify_odd(Context(1, 1), 3)
    assert report.passed and report.params["case"] == "log-ratio"
    assert verify_odd(Context(2, 2), 3, "randomized", points=3).passed
    with pytest.raises(ValueError):
        verify_odd(Context(1, 2), 2)


# -- combinatorial identities -----------------------------------------------------------

def test_goal_examples():
    u = Fraction(7, 3)
    lhs, rhs = goal_sides(1, u)
    assert lhs == rhs == -u
    lhs, rhs = goal_sides(2, u)
    assert lhs == -u / 2 + u * u / 2 == rhs == u * (u - 1) / 2
    for k in range(1, 8):
        assert verify_goal(k).passed
        assert verify_goal(k, "randomized", points=3).passed


def test_counting_examples():
    assert verify_counting(1).passed
    report = verify_counting(6)
    assert report.passed and report.certificate["compositions"] == 2 ** 6 - 1


# -- closed forms ------------------------------------------------------------------------

def test_rank1_closed_forms():
    reports = verify_rank1_closed_forms(3)
    assert [r.check for r in reports] == ["rank1_hilbert_series", "rank1_binomial",
                                          "co_formula", "co_formula"]
    assert all(r.passed for r in reports)


def test_co_formula_literal_needs_randomized_mode():
    assert verify_co_formula(2, form="literal", mode="symbolic").verdict == "skipped"


def test_co_formula_other_twist_fails_with_witness():
    report = verify_co_formula(2, reading="m+e/2")
    assert report.verdict == "fail"
    assert {"lhs", "rhs", "index"} <= set(report.certificate)
    rand = verify_co_formula(2, reading="m+e/2", form="literal", mode="randomized", points=3)
    assert rand.verdict == "fail" and "witness" in rand.certificate


def test_hilbert_and_residue():
    assert verify_hilbert(4).passed
    assert verify_hilbert(4, "randomized", points=3).passed
    report = verify_residue(3)
    assert report.passed and report.certificate["routes"] == ["direct", "hilbert-limit"]


def test_parity_unit_and_symmetries():
    assert verify_parity_unit(Context(1, 0), 4).passed
    assert verify_parity_unit(Context(2, 0), 2).passed
    assert verify_flavor_symmetry(Context(1, 2), 3).passed
    assert verify_exchange_symmetry(Context(2, 4), 2).passed
    assert verify_sign_parity(Context(1, 2), 3).passed
    assert verify_sign_parity(Context(2, 4), 2, "randomized", points=3).passed


# -- report mechanics --------------------------------------------------------------------

def wrong_identity(ev):
    # alpha_1 is not alpha_1 + 1
    ctx = Context(1, 2)
    return [ev.integral(ctx, 1)], [ev.integral(ctx, 1) + 1]


@pytest.mark.parametrize("mode", ["symbolic", "randomized"])
def test_failures_carry_a_witness(mode):
    report = run_identity("wrong", {}, wrong_identity, 5, mode, points=4, seed=3)
    assert report.verdict == "fail"
    if mode == "symbolic":
        assert report.certificate["lhs"] != report.certificate["rhs"]
    else:
        assert len(report.certificate["witness"]) == 5
        lhs, rhs = report.certificate["lhs"], report.certificate["rhs"]
        assert Fraction(rhs[0]) - Fraction(lhs[0]) == 1


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        run_identity("wrong", {}, wrong_identity, 5, "approximate")


@pytest.mark.parametrize("check", [
    lambda mode: verify_main(Context(1, 2), 3, mode, points=4, seed=5),
    lambda mode: verify_even(Context(1, 2), 3, mode, points=4, seed=5),
    lambda mode: verify_reduce(Context(1, 2), 2, mode, points=4, seed=5),
    lambda mode: verify_odd(Context(1, 1), 3, mode, points=4, seed=5),
    lambda mode: verify_parity_unit(Context(1, 0), 3, mode, points=4, seed=5),
    lambda mode: verify_hilbert(3, mode, points=4, seed=5),
    lambda mode: verify_goal(5, mode, points=4, seed=5),
])
def test_symbolic_pass_implies_randomized_pass(check):
    assert check("symbolic").passed
    assert check("randomized").passed


def test_reports_are_deterministic():
    def strip(report):
        data = json.loads(report.to_json())
        data.pop("duration_s")
        return data

    a = verify_main(Context(2, 4), 2, "randomized", points=4, seed=9)
    b = verify_main(Context(2, 4), 2, "randomized", points=4, seed=9)
    assert strip(a) == strip(b)
    c = verify_main(Context(2, 4), 2, "randomized", points=4, seed=10)
    assert strip(a)["certificate"]["points"] != strip(c)["certificate"]["points"]
    keys = set(json.loads(a.to_json()))
    assert keys == {"check", "params", "verdict", "certificate", "duration_s"}
