"""The fourteen acceptance criteria, each at its stated depth and tolerance.

Every criterion records one PASS/FAIL line (shown in the terminal summary) and
then asserts. Where a symbolic computation is beyond desk scale for a pure
Python kernel, the same identity is checked exactly at seeded random points and
the line says so.
"""
from __future__ import annotations

import pytest

from nekrasov.cache import canonical_dumps, sha256
from nekrasov.cli import alpha_at_points
from nekrasov.exactalg import RationalFunction
from nekrasov.localization import Context, alpha_n, localization_sum
from nekrasov.wallcross import (verify_co_formula, verify_counting, verify_even,
                                verify_exchange_symmetry, verify_flavor_symmetry, verify_goal,
                                verify_hilbert, verify_main, verify_odd, verify_parity_unit,
                                verify_rank1_closed_forms, verify_residue, verify_sign_parity)

SEED = 20240607
POINTS = 20

pytestmark = pytest.mark.slow


def summarize(reports):
    failed = [r for r in reports if not r.passed]
    return not failed, failed


def describe_failures(failed):
    return "; ".join(f"{r.check} {r.params} -> {r.verdict}" for r in failed)


def test_criterion_01_alpha1_golden_value(criterion):
    ctx = Context(1, 2)
    e1, e2, a, m1, m2 = (RationalFunction.variable(ctx.vars, i) for i in range(5))
    ep = e1 + e2
    golden = (a - ep / 2 + m1) * (a - ep / 2 + m2) / (e1 * e2)
    ok = alpha_n(ctx, 1) == golden
    assert criterion(1, ok, "alpha_1 (r=1, Nf=2) equals (a-e+/2+m1)(a-e+/2+m2)/(e1 e2) exactly")


def test_criterion_02_main_identity_symbolic(criterion):
    reports = [verify_main(Context(1, 2), n) for n in range(1, 7)]
    reports += [verify_main(Context(2, 4), n) for n in range(1, 4)]
    ok, failed = summarize(reports)
    seconds = sum(r.duration_s for r in reports)
    assert criterion(2, ok, f"beta_n - alpha_n = falling-factorial sum, symbolic, r=1 n<=6 and "
                            f"r=2 n<=3 ({seconds:.0f}s) {describe_failures(failed)}")


def test_criterion_03_main_identity_randomized(criterion):
    cases = [(1, n) for n in range(1, 11)] + [(2, n) for n in range(1, 7)] + [(3, n) for n in range(1, 5)]
    reports = [verify_main(Context(r, 2 * r), n, "randomized", POINTS, SEED) for r, n in cases]
    ok, failed = summarize(reports)
    assert all(len(r.certificate["points"]) == POINTS for r in reports if r.passed)
    assert criterion(3, ok, f"main identity at {POINTS} seeded points (seed {SEED}), r=1 n<=10, "
                            f"r=2 n<=6, r=3 n<=4 {describe_failures(failed)}")


def test_criterion_04_even_identity(criterion):
    reports = [verify_even(Context(1, 2), 6, "randomized", POINTS, SEED),
               verify_even(Context(2, 4), 4, "randomized", POINTS, SEED)]
    ok, failed = summarize(reports)
    assert criterion(4, ok, "Z(-e) = (1-(-1)^r q)^u_r Z(e) coefficient-wise, order 6 (r=1) and "
                            f"order 4 (r=2), {POINTS} seeded points {describe_failures(failed)}")


def test_criterion_05_hilbert_closed_form(criterion):
    report = verify_hilbert(8)
    series = verify_rank1_closed_forms(8)[0]
    ok = report.passed and series.passed
    assert criterion(5, ok, "Hilbert-scheme integrals = prod_i (m1 m2/(e1 e2)+i-1)/n!, symbolic n<=8, "
                            "and the generating series = (1-q)^(-m1 m2/(e1 e2)) to order 8")


def test_criterion_06_residue_both_routes(criterion):
    report = verify_residue(6)
    ok = report.passed and report.certificate.get("routes") == ["direct", "hilbert-limit"]
    assert criterion(6, ok, "residue sum = (e1+e2)/(p e1 e2) symbolically for p<=6 by the direct "
                            "route and the Hilbert-limit route")


def test_criterion_07_goal_identity(criterion):
    reports = [verify_goal(k) for k in range(1, 11)]
    ok, failed = summarize(reports)
    assert criterion(7, ok, "composition sum = (-1)^k u(u-1)...(u-k+1)/k! in Q[u], k<=10 "
                            f"{describe_failures(failed)}")


def test_criterion_08_counting_identity(criterion):
    reports = [verify_counting(n) for n in range(1, 9)]
    ok, failed = summarize(reports)
    assert criterion(8, ok, "decomposition-type counts satisfy the product identity, all "
                            f"compositions, n<=8 {describe_failures(failed)}")


def test_criterion_09_parity(criterion):
    reports = []
    # N_f <= 2r - 2: invariance under e -> -e
    reports.append(verify_odd(Context(1, 0), 4))
    for nf in (0, 1, 2):
        reports.append(verify_odd(Context(2, nf), 3))
        reports.append(verify_odd(Context(2, nf), 4, "randomized", POINTS, SEED))
    # N_f = 2r - 1: log-ratio = (-1)^(r+1) (e1+e2)/(e1 e2) q exactly
    reports.append(verify_odd(Context(1, 1), 4))
    reports.append(verify_odd(Context(2, 3), 4, "randomized", POINTS, SEED))
    ok, failed = summarize(reports)
    assert criterion(9, ok, "Nf<=2r-2 invariant under e->-e (r=1 symbolic n<=4; r=2 symbolic n<=3 "
                            f"and {POINTS} points n<=4); Nf=2r-1 log-ratio exact to order 4 "
                            "(r=1 symbolic, r=2 randomized) " + describe_failures(failed))


def test_criterion_10_rank1_binomial(criterion):
    report = verify_rank1_closed_forms(8)[1]
    assert report.check == "rank1_binomial"
    assert criterion(10, report.passed, "rank-1 Z = (1+q)^alpha_1 to order 8, symbolic")


def test_criterion_11_unit_parity(criterion):
    reports = [verify_parity_unit(Context(1, 0), 5), verify_parity_unit(Context(2, 0), 5)]
    ok, failed = summarize(reports)
    assert criterion(11, ok, "Z with integrand 1 invariant under e->-e to order 5, r=1 and r=2, "
                             f"symbolic {describe_failures(failed)}")


def test_criterion_12_co_product_formula(criterion):
    adopted = [verify_co_formula(4, "m-e/2", "homogenized"),
               verify_co_formula(4, "m-e/2", "literal", "randomized", POINTS, SEED)]
    other = [verify_co_formula(4, "m+e/2", "homogenized"),
             verify_co_formula(4, "m+e/2", "literal", "randomized", POINTS, SEED)]
    ok = all(r.passed for r in adopted)
    verdicts = lambda rs: "/".join(r.verdict for r in rs)
    summary = (f"rank-1 tangent-twisted Z = prod (1-q^n)^(e+^2/4-m1^2-1) to order 4: twist m1-e+/2 "
               f"{verdicts(adopted)} (homogenized symbolic/literal on e1 e2=1); twist m1+e+/2 "
               f"{verdicts(other)}; documented convention choice")
    assert criterion(12, ok, summary)
    # the other reading is a genuine mismatch, reported with a witness
    assert all(r.verdict == "fail" for r in other)


def hashes_for(workers):
    out = {}
    for r, n_max in ((1, 5), (2, 2)):
        ctx = Context(r, 2 * r)
        for n in range(n_max + 1):
            out[("symbolic", r, n)] = localization_sum(ctx, n, workers=workers).digest()
    ctx = Context(2, 4)
    for n in range(3, 6):
        payload = alpha_at_points(ctx, n, POINTS, SEED, workers)
        out[("randomized", 2, n)] = sha256(canonical_dumps(payload))
    return out


def test_criterion_13_determinism_across_workers(criterion):
    runs = {w: hashes_for(w) for w in (1, 4, 8)}
    ok = runs[1] == runs[4] == runs[8]
    assert criterion(13, ok, "alpha_n hashes identical for workers 1, 4, 8: symbolic r=1 n<=5, "
                             f"r=2 n<=2; exact values at {POINTS} seeded points for r=2 n=3..5")


def test_criterion_14_symmetries(criterion):
    reports = []
    for n in range(1, 5):
        reports += [verify_flavor_symmetry(Context(1, 2), n), verify_exchange_symmetry(Context(1, 2), n)]
    for n in range(1, 3):
        reports += [verify_flavor_symmetry(Context(2, 4), n), verify_exchange_symmetry(Context(2, 4), n)]
    for n in range(3, 5):
        reports += [verify_flavor_symmetry(Context(2, 4), n, "randomized", POINTS, SEED),
                    verify_exchange_symmetry(Context(2, 4), n, "randomized", POINTS, SEED)]
    reports.append(verify_sign_parity(Context(1, 2), 4))
    reports.append(verify_sign_parity(Context(2, 4), 4, "randomized", POINTS, SEED))
    ok, failed = summarize(reports)
    assert criterion(14, ok, "flavor permutations and e1<->e2 leave alpha_n invariant (r=1 n<=4, "
                             "r=2 n<=2 symbolic, n<=4 randomized); Z(e,a,m)=Z(-e,-a,-m) to order 4 "
                             f"(r=1 symbolic, r=2 randomized) {describe_failures(failed)}")
